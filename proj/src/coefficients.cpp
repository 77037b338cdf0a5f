#include "mafclt/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "mafclt/errors.hpp"
#include "mafclt/numerics.hpp"
#include "mafclt/summation.hpp"

namespace mafclt {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative tail level used by auto_horizon.
constexpr double kHorizonTolerance = 1e-8;
constexpr std::size_t kMaxHorizon = std::size_t{1} << 24;

double spike_exponent(const SpikeCoefficients& m) { return 1.0 + m.delta + m.epsilon; }

// E xi^s for the base law of the iid scaled model.
double base_moment(BaseLaw base, double s) { return base == BaseLaw::uniform ? 1.0 / (1.0 + s) : 0.5; }

// Sum_{j=0}^{n} x^j for 0 <= x < 1.
double geometric_partial(double x, std::size_t n) {
    if (x == 0.0) return 1.0;
    return -std::expm1(static_cast<double>(n + 1) * std::log(x)) / (1.0 - x);
}

// Index of the spike for a uniform draw: the smallest i >= 1 with
// S_i >= omega, i.e. zeta_tail(s, i+1) <= (1 - omega) * S.
double spike_index(const SpikeCoefficients& m, double omega) {
    const double s = spike_exponent(m);
    const double target = (1.0 - omega) * spike_normalizer(m);
    auto reached = [&](double i) { return zeta_tail(s, i + 1.0) <= target; };
    if (reached(1.0)) return 1.0;
    double lo = 1.0;  // not reached
    double hi = 2.0;
    while (!reached(hi)) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw NumericError("spike index search overflowed");
    }
    // Integer bisection on doubles; exact while indices stay below 2^53.
    while (hi - lo > 1.0) {
        const double mid = std::floor(lo + (hi - lo) / 2.0);
        if (mid <= lo || mid >= hi) break;
        (reached(mid) ? hi : lo) = mid;
    }
    return hi;
}

bool nonincreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1]) return false;
    return true;
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

}  // namespace

void validate(const CoeffModel& model) {
    std::visit(overloaded{
                   [](const FiniteCoefficients& m) {
                       if (m.values.empty()) throw ConfigError("finite coefficient list must not be empty");
                       for (double v : m.values)
                           if (!std::isfinite(v)) throw ConfigError("coefficients must be finite");
                   },
                   [](const GeometricCoefficients& m) {
                       if (!std::isfinite(m.scale)) throw ConfigError("geometric scale must be finite");
                       if (!(std::abs(m.ratio) < 1.0)) throw ConfigError("geometric ratio must satisfy |ratio| < 1");
                   },
                   [](const PowerCoefficients& m) {
                       if (!std::isfinite(m.scale)) throw ConfigError("power-law scale must be finite");
                       if (!(m.exponent > 1.0)) throw ConfigError("power-law exponent must exceed 1");
                   },
                   [](const IidScaledCoefficients& m) {
                       if (!(m.scale > 0.0 && std::isfinite(m.scale))) throw ConfigError("iid scale must be positive");
                       if (!(m.rho > 0.0 && m.rho < 1.0)) throw ConfigError("iid decay rate rho must lie in (0,1)");
                   },
                   [](const SpikeCoefficients& m) {
                       if (!(m.delta > 0.0 && m.delta <= 1.0)) throw ConfigError("spike delta must lie in (0,1]");
                       if (!(m.epsilon > 0.0)) throw ConfigError("spike epsilon must be positive");
                       if (!(m.gamma > 0.0 && m.gamma < 1.0)) throw ConfigError("spike gamma must lie in (0,1)");
                       if (!(m.delta + m.epsilon < m.gamma))
                           throw ConfigError("spike model requires delta + epsilon < gamma");
                   },
               },
               model);
}

bool is_deterministic(const CoeffModel& model) {
    return std::holds_alternative<FiniteCoefficients>(model) || std::holds_alternative<GeometricCoefficients>(model) ||
           std::holds_alternative<PowerCoefficients>(model);
}

bool is_finite_order(const CoeffModel& model) { return std::holds_alternative<FiniteCoefficients>(model); }

std::string model_name(const CoeffModel& model) {
    return std::visit(overloaded{
                          [](const FiniteCoefficients&) { return std::string("finite"); },
                          [](const GeometricCoefficients&) { return std::string("geometric"); },
                          [](const PowerCoefficients&) { return std::string("power"); },
                          [](const IidScaledCoefficients&) { return std::string("iid_scaled"); },
                          [](const SpikeCoefficients&) { return std::string("spike"); },
                      },
                      model);
}

double spike_normalizer(const SpikeCoefficients& model) { return zeta_tail(spike_exponent(model), 1.0); }

std::optional<double> abs_moment(const CoeffModel& model, std::size_t j, double s) {
    const double jd = static_cast<double>(j);
    return std::visit(overloaded{
                          [&](const FiniteCoefficients& m) -> std::optional<double> {
                              if (j >= m.values.size() || m.values[j] == 0.0) return 0.0;
                              return std::pow(std::abs(m.values[j]), s);
                          },
                          [&](const GeometricCoefficients& m) -> std::optional<double> {
                              return std::pow(std::abs(m.scale), s) * std::pow(std::abs(m.ratio), s * jd);
                          },
                          [&](const PowerCoefficients& m) -> std::optional<double> {
                              return std::pow(std::abs(m.scale), s) * std::pow(jd + 1.0, -m.exponent * s);
                          },
                          [&](const IidScaledCoefficients& m) -> std::optional<double> {
                              return std::pow(m.scale * std::pow(m.rho, jd), s) * base_moment(m.base, s);
                          },
                          [&](const SpikeCoefficients& m) -> std::optional<double> {
                              if (j == 0) return 0.0;
                              return std::pow(jd, s - spike_exponent(m)) / spike_normalizer(m);
                          },
                      },
                      model);
}

std::optional<bool> moment_series_converges(const CoeffModel& model, double s) {
    return std::visit(overloaded{
                          [&](const PowerCoefficients& m) -> std::optional<bool> { return m.exponent * s > 1.0; },
                          [&](const SpikeCoefficients& m) -> std::optional<bool> { return s < m.delta + m.epsilon; },
                          [&](const auto&) -> std::optional<bool> { return true; },
                      },
                      model);
}

CoeffDraw draw_coefficients(const CoeffModel& model, std::size_t horizon, RandomStream& rng) {
    validate(model);
    CoeffDraw draw;
    draw.values.assign(horizon + 1, 0.0);
    std::visit(overloaded{
                   [&](const FiniteCoefficients& m) {
                       CompensatedSum tail;
                       CompensatedSum tail_abs;
                       for (std::size_t j = 0; j < m.values.size(); ++j) {
                           if (j <= horizon) {
                               draw.values[j] = m.values[j];
                           } else {
                               tail.add(m.values[j]);
                               tail_abs.add(std::abs(m.values[j]));
                           }
                       }
                       draw.tail_value = tail.value();
                       draw.tail_bound = tail_abs.value();
                   },
                   [&](const GeometricCoefficients& m) {
                       double term = m.scale;
                       for (std::size_t j = 0; j <= horizon; ++j) {
                           draw.values[j] = term;
                           term *= m.ratio;
                       }
                       // term = scale * ratio^{K+1}
                       draw.tail_value = term / (1.0 - m.ratio);
                       draw.tail_bound = std::abs(term) / (1.0 - std::abs(m.ratio));
                   },
                   [&](const PowerCoefficients& m) {
                       for (std::size_t j = 0; j <= horizon; ++j)
                           draw.values[j] = m.scale * std::pow(static_cast<double>(j) + 1.0, -m.exponent);
                       const double rest = zeta_tail(m.exponent, static_cast<double>(horizon) + 2.0);
                       draw.tail_value = m.scale * rest;
                       draw.tail_bound = std::abs(m.scale) * rest;
                   },
                   [&](const IidScaledCoefficients& m) {
                       double envelope = m.scale;
                       for (std::size_t j = 0; j <= horizon; ++j) {
                           const double xi = m.base == BaseLaw::uniform ? rng.uniform() : (rng.bernoulli(0.5) ? 1.0 : 0.0);
                           draw.values[j] = envelope * xi;
                           envelope *= m.rho;
                       }
                       draw.tail_value = 0.0;
                       draw.tail_bound = envelope / (1.0 - m.rho);
                       draw.tail_exact = false;
                   },
                   [&](const SpikeCoefficients& m) {
                       const double i = spike_index(m, rng.uniform_open());
                       if (i <= static_cast<double>(horizon)) {
                           draw.values[static_cast<std::size_t>(i)] = i;
                       } else {
                           draw.tail_value = i;
                           draw.tail_bound = i;
                       }
                   },
               },
               model);
    CompensatedSum total;
    for (double v : draw.values) total.add(v);
    total.add(draw.tail_value);
    draw.total = total.value();
    return draw;
}

std::size_t auto_horizon(const CoeffModel& model, std::size_t min_horizon) {
    validate(model);
    if (const auto* f = std::get_if<FiniteCoefficients>(&model)) return std::max(min_horizon, f->values.size() - 1);
    if (std::holds_alternative<SpikeCoefficients>(model)) return min_horizon;

    // Certified tail bound and sum_{j<=K} |C_j| (or a lower bound of it) as functions of K.
    std::function<double(std::size_t)> tail_bound;
    std::function<double(std::size_t)> head_abs;
    if (const auto* g = std::get_if<GeometricCoefficients>(&model)) {
        const double a = std::abs(g->scale);
        const double r = std::abs(g->ratio);
        tail_bound = [=](std::size_t k) { return a * std::pow(r, static_cast<double>(k + 1)) / (1.0 - r); };
        head_abs = [=](std::size_t k) { return a * geometric_partial(r, k); };
    } else if (const auto* p = std::get_if<PowerCoefficients>(&model)) {
        const double a = std::abs(p->scale);
        const double e = p->exponent;
        tail_bound = [=](std::size_t k) { return a * zeta_tail(e, static_cast<double>(k) + 2.0); };
        head_abs = [=](std::size_t k) { return a * power_partial_sum(e, static_cast<double>(k) + 1.0); };
    } else {
        // Random coefficients: the realized head sum is unknown in advance, so use 0.
        const auto& m = std::get<IidScaledCoefficients>(model);
        tail_bound = [=](std::size_t k) { return m.scale * std::pow(m.rho, static_cast<double>(k + 1)) / (1.0 - m.rho); };
        head_abs = [](std::size_t) { return 0.0; };
    }
    auto ok = [&](std::size_t k) { return tail_bound(k) <= kHorizonTolerance * (head_abs(k) + 1.0); };
    if (ok(min_horizon)) return min_horizon;
    std::size_t lo = min_horizon;
    std::size_t hi = std::max<std::size_t>(1, min_horizon * 2);
    while (!ok(hi)) {
        lo = hi;
        hi *= 2;
        if (hi > kMaxHorizon)
            throw ConfigError("coefficient tail decays too slowly for an automatic horizon; set it explicitly");
    }
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

SandwichVerdict check_sandwich(std::span<const double> values) {
    if (values.empty()) throw DomainError("check_sandwich: empty coefficient list");
    std::vector<double> partial(values.size());
    CompensatedSum acc;
    CompensatedSum abs_acc;
    for (std::size_t i = 0; i < values.size(); ++i) {
        acc.add(values[i]);
        abs_acc.add(std::abs(values[i]));
        partial[i] = acc.value();
    }
    const double total = partial.back();
    const double scale = abs_acc.value();
    if (std::abs(total) <= 1e-12 * scale) return SandwichVerdict::indeterminate;
    constexpr double slack = 1e-12;
    for (double s : partial) {
        const double ratio = s / total;
        if (ratio < -slack || ratio > 1.0 + slack) return SandwichVerdict::violated;
    }
    return SandwichVerdict::holds;
}

TailSums tail_sum(const CoeffDraw& draw, std::size_t q) {
    const std::size_t k = draw.horizon();
    if (draw.values.empty() || q > k) throw DomainError("tail_sum: q exceeds the coefficient horizon");
    auto suffix = [&](std::size_t from) {
        CompensatedSum acc;
        for (std::size_t j = from; j <= k; ++j) acc.add(draw.values[j]);
        acc.add(draw.tail_value);
        return acc.value();
    };
    return {suffix(q), suffix(q + 1), draw.tail_exact ? 0.0 : draw.tail_bound};
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "PASS";
        case Verdict::fail: return "FAIL";
        case Verdict::inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

namespace {

// sum_{j=0}^{n} E|C_j|^s in closed form.
double moment_partial_sum(const CoeffModel& model, std::size_t n, double s) {
    const double nd = static_cast<double>(n);
    return std::visit(overloaded{
                          [&](const FiniteCoefficients& m) {
                              CompensatedSum acc;
                              for (std::size_t j = 0; j <= n && j < m.values.size(); ++j)
                                  if (m.values[j] != 0.0) acc.add(std::pow(std::abs(m.values[j]), s));
                              return acc.value();
                          },
                          [&](const GeometricCoefficients& m) {
                              return std::pow(std::abs(m.scale), s) * geometric_partial(std::pow(std::abs(m.ratio), s), n);
                          },
                          [&](const PowerCoefficients& m) {
                              return std::pow(std::abs(m.scale), s) * power_partial_sum(m.exponent * s, nd + 1.0);
                          },
                          [&](const IidScaledCoefficients& m) {
                              return std::pow(m.scale, s) * base_moment(m.base, s) * geometric_partial(std::pow(m.rho, s), n);
                          },
                          [&](const SpikeCoefficients& m) {
                              return power_partial_sum(spike_exponent(m) - s, nd) / spike_normalizer(m);
                          },
                      },
                      model);
}

// E[(sum_{i>=n}|C_i|)^{eta-delta} sum_{j>=n}|C_j|^delta], closed form or Monte Carlo.
Estimate tail_expectation(const CoeffModel& model, std::size_t n, const MomentExponents& ex, int reps,
                          RandomStream& rng) {
    const double nd = static_cast<double>(n);
    const double outer = ex.eta - ex.delta;
    return std::visit(
        overloaded{
            [&](const FiniteCoefficients& m) {
                CompensatedSum a;
                CompensatedSum b;
                for (std::size_t j = n; j < m.values.size(); ++j) {
                    a.add(std::abs(m.values[j]));
                    if (m.values[j] != 0.0) b.add(std::pow(std::abs(m.values[j]), ex.delta));
                }
                const double bv = b.value();
                return Estimate{bv == 0.0 ? 0.0 : std::pow(a.value(), outer) * bv, 0.0, true};
            },
            [&](const GeometricCoefficients& m) {
                const double sc = std::abs(m.scale);
                const double r = std::abs(m.ratio);
                if (sc == 0.0 || r == 0.0) return Estimate{n == 0 ? std::pow(sc, ex.eta) : 0.0, 0.0, true};
                const double a = sc * std::pow(r, nd) / (1.0 - r);
                const double rd = std::pow(r, ex.delta);
                const double b = std::pow(sc, ex.delta) * std::pow(rd, nd) / (1.0 - rd);
                return Estimate{std::pow(a, outer) * b, 0.0, true};
            },
            [&](const PowerCoefficients& m) {
                const double sc = std::abs(m.scale);
                if (m.exponent * ex.delta <= 1.0) return Estimate{kInf, 0.0, true};
                const double a = sc * zeta_tail(m.exponent, nd + 1.0);
                const double b = std::pow(sc, ex.delta) * zeta_tail(m.exponent * ex.delta, nd + 1.0);
                return Estimate{std::pow(a, outer) * b, 0.0, true};
            },
            [&](const IidScaledCoefficients& m) {
                // Terms below the envelope cutoff change the sums by less than a double ulp.
                const double start = m.scale * std::pow(m.rho, nd);
                const std::size_t len =
                    1 + static_cast<std::size_t>(std::ceil(std::log(1e-18) / std::log(m.rho)));
                CompensatedSum mean;
                CompensatedSum sq;
                for (int rep = 0; rep < reps; ++rep) {
                    CompensatedSum a;
                    CompensatedSum b;
                    double env = start;
                    for (std::size_t j = 0; j < len; ++j) {
                        const double xi = m.base == BaseLaw::uniform ? rng.uniform() : (rng.bernoulli(0.5) ? 1.0 : 0.0);
                        const double c = env * xi;
                        a.add(c);
                        if (c > 0.0) b.add(std::pow(c, ex.delta));
                        env *= m.rho;
                    }
                    const double bv = b.value();
                    const double v = bv == 0.0 ? 0.0 : std::pow(a.value(), outer) * bv;
                    mean.add(v);
                    sq.add(v * v);
                }
                const double k = static_cast<double>(reps);
                const double mu = mean.value() / k;
                const double var = reps > 1 ? std::max(0.0, (sq.value() - k * mu * mu) / (k - 1.0)) : 0.0;
                return Estimate{mu, std::sqrt(var / k), false};
            },
            [&](const SpikeCoefficients& m) {
                // Only the spike contributes: E[i^eta 1{i >= n}].
                const double s = spike_exponent(m) - ex.eta;
                if (s <= 1.0) return Estimate{kInf, 0.0, true};
                return Estimate{zeta_tail(s, std::max(1.0, nd)) / spike_normalizer(m), 0.0, true};
            },
        },
        model);
}

Verdict series_verdict(const CoeffModel& model, double s, const std::vector<double>& partials) {
    if (auto known = moment_series_converges(model, s)) return *known ? Verdict::pass : Verdict::fail;
    if (partials.size() < 3) return Verdict::inconclusive;
    // Shrinking increments suggest convergence; otherwise no call is made.
    const double d1 = partials[partials.size() - 2] - partials[partials.size() - 3];
    const double d2 = partials.back() - partials[partials.size() - 2];
    return d2 < 0.5 * d1 ? Verdict::pass : Verdict::inconclusive;
}

}  // namespace

DiagnosticsReport moment_diagnostics(const CoeffModel& model, const MomentExponents& exponents,
                                     std::span<const std::size_t> n_grid, int mc_reps, RandomStream& rng,
                                     double threshold) {
    validate(model);
    if (mc_reps <= 0) throw ConfigError("moment_diagnostics: mc_reps must be positive");
    if (!(exponents.delta > 0.0 && exponents.delta <= 1.0)) throw ConfigError("delta must lie in (0,1]");
    if (!(exponents.gamma > 0.0 && exponents.gamma < 1.0)) throw ConfigError("gamma must lie in (0,1)");
    if (!(exponents.eta > exponents.delta)) throw ConfigError("eta must exceed delta");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1]) throw ConfigError("n_grid must be strictly increasing");

    DiagnosticsReport report;
    report.exponents = exponents;
    std::vector<double> delta_partials;
    std::vector<double> gamma_partials;
    std::vector<double> tail_values;
    for (std::size_t n : n_grid) {
        MomentRow row;
        row.n = n;
        row.delta_sum = {moment_partial_sum(model, n, exponents.delta), 0.0, true};
        row.gamma_sum = {moment_partial_sum(model, n, exponents.gamma), 0.0, true};
        Estimate e = tail_expectation(model, n, exponents, mc_reps, rng);
        const double log_factor = n > 1 ? std::pow(std::log(static_cast<double>(n)), 1.0 + exponents.eta) : 0.0;
        if (std::isinf(e.value)) {
            row.tail_condition = e;
        } else {
            row.tail_condition = {log_factor * e.value, log_factor * e.std_error, e.analytic};
        }
        delta_partials.push_back(row.delta_sum.value);
        gamma_partials.push_back(row.gamma_sum.value);
        tail_values.push_back(row.tail_condition.value);
        report.rows.push_back(row);
    }

    report.delta_moments = series_verdict(model, exponents.delta, delta_partials);
    report.gamma_moments = series_verdict(model, exponents.gamma, gamma_partials);

    const bool infinite = std::any_of(tail_values.begin(), tail_values.end(), [](double v) { return std::isinf(v); });
    if (infinite) {
        report.tail_condition = Verdict::fail;
    } else if (tail_values.size() < 3) {
        report.tail_condition = Verdict::inconclusive;
    } else if (tail_values.back() < threshold &&
               (strictly_decreasing(tail_values) || (tail_values.back() == 0.0 && nonincreasing(tail_values)))) {
        report.tail_condition = Verdict::pass;
    } else if (tail_values.back() >= tail_values.front()) {
        report.tail_condition = Verdict::fail;
    } else {
        report.tail_condition = Verdict::inconclusive;
    }
    return report;
}

}  // namespace mafclt
