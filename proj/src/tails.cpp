#include "mafclt/tails.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mafclt/errors.hpp"

namespace mafclt {

namespace {

constexpr double kQuadratureTol = 1e-12;

// x^{-alpha} L(x) without the cap at one.
double raw_tail(const TailSpec& spec, double x) {
    return std::pow(x, -spec.alpha()) * spec.sv()(x);
}

// ln of raw_tail at x = e^y.
double log_raw_tail(const TailSpec& spec, double y) {
    const SlowlyVarying& sv = spec.sv();
    double v = std::log(sv.c) - spec.alpha() * y;
    if (sv.kind == SlowVariation::log && sv.beta != 0.0) v += sv.beta * std::log(std::max(1.0, y));
    return v;
}

// Smallest y >= y_lo with log_raw_tail(y) <= log_level, by bisection; the
// function is nonincreasing above ln x_min.
double solve_log_level(const TailSpec& spec, double y_lo, double log_level) {
    if (log_raw_tail(spec, y_lo) <= log_level) return y_lo;
    double span = (2.0 / spec.alpha()) * std::max(1.0, std::log(spec.sv().c) - log_level) + 1.0;
    double y_hi = y_lo + span;
    int expansions = 0;
    while (log_raw_tail(spec, y_hi) > log_level) {
        span *= 2.0;
        y_hi = y_lo + span;
        if (++expansions > 200) throw NumericError("tail level solver: failed to bracket the root");
    }
    double lo = y_lo;
    double hi = y_hi;
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (log_raw_tail(spec, mid) > log_level) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

// x = inf{x : P(|Z| > x) <= level}.
double solve_tail_level(const TailSpec& spec, double level) {
    const double x0 = spec.support_start();
    if (level >= tail_prob(spec, x0)) return x0;
    const SlowlyVarying& sv = spec.sv();
    if (sv.kind == SlowVariation::constant || sv.beta == 0.0) {
        return std::max(x0, std::pow(sv.c / level, 1.0 / spec.alpha()));
    }
    return std::exp(solve_log_level(spec, std::log(x0), std::log(level)));
}

// Integral over [lo, hi] of x^{s-1} * x^{-alpha} L(x) dx, lo >= support_start.
// Substituting x = e^y gives c e^{(s-alpha) y} (1 v y)^beta dy; the part
// below y = 1 and the whole constant case are closed form.
double power_tail_integral(const TailSpec& spec, double s, double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    const double k = s - spec.alpha();
    const SlowlyVarying& sv = spec.sv();
    const double ylo = std::log(lo);
    const double yhi = std::isinf(hi) ? std::numeric_limits<double>::infinity() : std::log(hi);
    if (std::isinf(yhi) && !(k < 0.0)) return std::numeric_limits<double>::infinity();

    auto exp_piece = [&](double a, double b) {
        if (!(b > a)) return 0.0;
        if (k == 0.0) return sv.c * (b - a);
        const double eb = std::isinf(b) ? 0.0 : std::exp(k * b);
        return sv.c * (eb - std::exp(k * a)) / k;
    };
    const bool has_log = sv.kind == SlowVariation::log && sv.beta != 0.0;
    if (!has_log) return exp_piece(ylo, yhi);

    double total = exp_piece(ylo, std::min(yhi, 1.0));
    const double a = std::max(ylo, 1.0);
    if (!(yhi > a)) return total;
    // Log form: exp_sinh probes huge y where e^{ky} underflows while y^beta overflows.
    auto integrand = [&](double y) { return sv.c * std::exp(k * y + sv.beta * std::log(y)); };
    double error = 0.0;
    double value = 0.0;
    if (std::isinf(yhi)) {
        boost::math::quadrature::exp_sinh<double> integrator;
        double l1 = 0.0;
        value = integrator.integrate(integrand, a, yhi, kQuadratureTol, &error, &l1);
        if (error > 1e-9 * std::max(1.0, l1)) {
            throw NumericError("tail integral did not converge: estimated error " + std::to_string(error) +
                               " on value " + std::to_string(value));
        }
    } else {
        value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, a, yhi, 15,
                                                                              kQuadratureTol, &error);
        if (error > 1e-9 * std::max(1.0, std::abs(value))) {
            throw NumericError("tail integral did not converge: estimated error " + std::to_string(error) +
                               " on value " + std::to_string(value));
        }
    }
    return total + value;
}

}  // namespace

double SlowlyVarying::operator()(double x) const {
    if (kind == SlowVariation::constant || beta == 0.0) return c;
    return c * std::pow(std::max(1.0, std::log(x)), beta);
}

TailSpec::TailSpec(double alpha, double p, SlowlyVarying sv, double x_min, bool centered, bool symmetric)
    : alpha_(alpha), p_(p), r_(1.0 - p), sv_(sv), x_min_(x_min), centered_(centered), symmetric_(symmetric),
      x0_(x_min) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw ConfigError("tail index alpha must lie in the open interval (0,2)");
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("tail balance p must lie in [0,1]");
    if (!(x_min > 0.0) || !std::isfinite(x_min)) throw ConfigError("x_min must be positive and finite");
    if (!(sv.c > 0.0) || !std::isfinite(sv.c)) throw ConfigError("slowly varying constant c must be positive");
    if (sv.kind == SlowVariation::log) {
        if (!(sv.beta >= 0.0)) throw ConfigError("log power beta must be nonnegative");
        if (std::max(1.0, std::log(x_min)) < sv.beta / alpha) {
            throw ConfigError("log factor makes the tail increase above x_min; need max(1, ln x_min) >= beta/alpha");
        }
    }
    if (alpha == 1.0 && !symmetric) throw ConfigError("alpha = 1 requires a symmetric law");
    if (symmetric && p != 0.5) throw ConfigError("a symmetric law requires p = r = 1/2");
    if (alpha > 1.0 && !centered) throw ConfigError("alpha in (1,2) requires a centered law");
    if (alpha <= 1.0 && centered) throw ConfigError("centering needs a finite mean, i.e. alpha > 1");

    if (raw_tail(*this, x_min) > 1.0) {
        x0_ = std::exp(solve_log_level(*this, std::log(x_min), 0.0));
    }
    if (centered_) centering_ = (p_ - r_) * mean_magnitude(*this);
}

TailSpec TailSpec::regular(double alpha, double p, SlowlyVarying sv, double x_min) {
    return TailSpec(alpha, p, sv, x_min, alpha > 1.0, alpha == 1.0);
}

double tail_prob(const TailSpec& spec, double x) {
    if (!(x > 0.0)) throw DomainError("tail_prob: x must be positive");
    if (x < spec.x_min()) return 1.0;
    return std::min(1.0, raw_tail(spec, x));
}

double magnitude_quantile(const TailSpec& spec, double u) {
    if (!(u > 0.0 && u <= 1.0)) throw DomainError("magnitude_quantile: u must lie in (0,1]");
    return solve_tail_level(spec, u);
}

double mean_magnitude(const TailSpec& spec) {
    if (spec.alpha() <= 1.0) return std::numeric_limits<double>::infinity();
    const double x0 = spec.support_start();
    return x0 + power_tail_integral(spec, 1.0, x0, std::numeric_limits<double>::infinity());
}

double centering_constant(const TailSpec& spec) {
    if (spec.alpha() <= 1.0) throw DomainError("centering_constant: the mean is infinite for alpha <= 1");
    return (spec.p() - spec.r()) * mean_magnitude(spec);
}

double innovation_mean(const TailSpec& spec) {
    if (spec.alpha() <= 1.0) throw DomainError("innovation_mean: the mean is infinite for alpha <= 1");
    const double raw_mean = (spec.p() - spec.r()) * mean_magnitude(spec);
    return spec.centered() ? raw_mean - centering_constant(spec) : raw_mean;
}

double innovation_from_uniform(const TailSpec& spec, double u, bool positive) {
    const double m = magnitude_quantile(spec, u);
    return positive ? m : -m;
}

double sample_innovation(const TailSpec& spec, RandomStream& rng) {
    const double u = rng.uniform_open();
    const bool positive = rng.uniform() < spec.p();
    double z = innovation_from_uniform(spec, u, positive);
    return z - spec.centering();
}

double normalizer_a(const TailSpec& spec, double n) {
    if (!(n >= 1.0) || !std::isfinite(n)) throw DomainError("normalizer_a: n must be >= 1");
    return solve_tail_level(spec, 1.0 / n);
}

double truncated_moment(const TailSpec& spec, double n, double exponent, TruncationSide side) {
    const double alpha = spec.alpha();
    if (side == TruncationSide::le && !(exponent > alpha)) {
        throw DomainError("truncated_moment: side le requires exponent > alpha");
    }
    if (side == TruncationSide::gt && !(exponent > 0.0 && exponent < alpha)) {
        throw DomainError("truncated_moment: side gt requires 0 < exponent < alpha");
    }
    const double a = normalizer_a(spec, n);
    const double x0 = spec.support_start();
    const double ta = tail_prob(spec, a);
    double moment = 0.0;
    if (side == TruncationSide::le) {
        // E|Z|^e 1{|Z| <= a} = int_0^a e x^{e-1} (T(x) - T(a)) dx with T = 1 below x0.
        moment = std::pow(x0, exponent) + exponent * power_tail_integral(spec, exponent, x0, a) -
                 ta * std::pow(a, exponent);
    } else {
        moment = std::pow(a, exponent) * ta +
                 exponent * power_tail_integral(spec, exponent, a, std::numeric_limits<double>::infinity());
    }
    return n * std::pow(a, -exponent) * moment;
}

double truncated_moment_limit(double alpha, double exponent, TruncationSide side) {
    return side == TruncationSide::le ? alpha / (exponent - alpha) : alpha / (alpha - exponent);
}

TailBalance tail_balance_estimate(std::span<const double> sample, double x) {
    if (sample.empty()) throw DomainError("tail_balance_estimate: empty sample");
    if (!(x > 0.0)) throw DomainError("tail_balance_estimate: x must be positive");
    std::size_t exceed = 0;
    std::size_t positive = 0;
    for (double z : sample) {
        if (std::abs(z) > x) {
            ++exceed;
            if (z > x) ++positive;
        }
    }
    if (exceed == 0) throw EstimationError("tail_balance_estimate: no observation exceeds the level");
    const double p = static_cast<double>(positive) / static_cast<double>(exceed);
    return {p, static_cast<double>(exceed - positive) / static_cast<double>(exceed)};
}

}  // namespace mafclt
