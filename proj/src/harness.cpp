#include "mafclt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "mafclt/errors.hpp"
#include "mafclt/m2_metric.hpp"
#include "mafclt/ma_paths.hpp"
#include "mafclt/numerics.hpp"
#include "mafclt/stable_limit.hpp"
#include "mafclt/summation.hpp"

namespace mafclt {

namespace {

// Substream labels: experiment tag, then grid index, replication, purpose.
enum Tag : std::uint64_t { fclt_tag = 1, gap_tag = 2, coeff_tag = 3, path_tag = 4 };
enum Purpose : std::uint64_t { coefficients = 0, innovations = 1, reference_coefficients = 2, reference_limit = 3 };

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::string> base_assumptions() {
    return {
        "innovations follow the two-sided Pareto-type law P(|Z|>x) = min(1, x^-alpha L(x)) with L constant or "
        "c (1 v ln x)^beta; a centered law subtracts its analytic mean",
        "Levy-Khintchine truncation function x 1{|x|<=1}; the stable limit is sampled with index alpha, skew p-r, "
        "scale (Gamma(1-alpha) cos(pi alpha/2))^(1/alpha) and no shift (Cauchy with scale pi/2 at alpha = 1)",
        "pass thresholds are policy values, not constants derived from the limit theorems",
    };
}

std::size_t coefficient_horizon(const ExperimentConfig& cfg) {
    if (std::holds_alternative<SpikeCoefficients>(cfg.coeffs))
        throw ConfigError("the spike coefficient model has no finite horizon; path experiments cannot use it");
    if (cfg.horizon) {
        if (is_finite_order(cfg.coeffs)) {
            const auto& f = std::get<FiniteCoefficients>(cfg.coeffs);
            if (*cfg.horizon + 1 < f.values.size())
                throw ConfigError("horizon is shorter than the finite coefficient list");
        }
        return *cfg.horizon;
    }
    return auto_horizon(cfg.coeffs);
}

std::vector<double> sorted_copy(std::span<const double> v) {
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    return s;
}

std::string format_number(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

}  // namespace

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw DomainError("ks_two_sample: both samples must be nonempty");
    const auto sa = sorted_copy(a);
    const auto sb = sorted_copy(b);
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double best = 0.0;
    // Step through pooled values, consuming all ties before comparing the ECDFs.
    while (i < sa.size() || j < sb.size()) {
        double x;
        if (j == sb.size() || (i < sa.size() && sa[i] <= sb[j])) {
            x = sa[i];
        } else {
            x = sb[j];
        }
        while (i < sa.size() && sa[i] == x) ++i;
        while (j < sb.size() && sb[j] == x) ++j;
        best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return best;
}

double ks_critical_5pct(std::size_t m, std::size_t n) {
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    return 1.358 * std::sqrt((md + nd) / (md * nd));
}

json to_json(const Report& report) {
    json tables = json::array();
    for (const Table& t : report.tables) tables.push_back({{"name", t.name}, {"file", t.name + ".csv"}});
    return {{"experiment", report.experiment}, {"pass", report.pass},
            {"seed", report.seed},             {"summary", report.summary},
            {"assumptions", report.assumptions}, {"tables", tables}};
}

void write_report(const Report& report, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path base(dir);
    {
        std::ofstream out(base / "report.json");
        if (!out) throw ConfigError("cannot write report into " + dir);
        out << to_json(report).dump(2) << '\n';
    }
    {
        std::ofstream out(base / "timing.json");
        out << json{{"experiment", report.experiment}, {"wall_time_seconds", report.wall_time_seconds}}.dump(2) << '\n';
    }
    for (const Table& t : report.tables) {
        std::ofstream out(base / (t.name + ".csv"));
        for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
        out << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
            out << '\n';
        }
    }
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
    workers = std::max(1u, workers);
    if (workers == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    const unsigned used = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    for (unsigned w = 0; w < used; ++w) {
        threads.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = count;
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

Report run_fclt_experiment(const ExperimentConfig& cfg, unsigned workers) {
    const auto start = Clock::now();
    cfg.validate();
    const std::size_t horizon = coefficient_horizon(cfg);
    const auto k = static_cast<std::ptrdiff_t>(horizon);
    const TailSpec& tail = cfg.tail;
    const CharTriple triple = CharTriple::make(tail.alpha(), tail.p(), tail.r());
    const auto reps = static_cast<std::size_t>(cfg.reps);
    const auto ref_reps = static_cast<std::size_t>(cfg.reference_size());

    Report report;
    report.experiment = "fclt";
    report.seed = cfg.seed;
    report.assumptions = base_assumptions();
    report.assumptions.push_back("coefficient horizon K = " + std::to_string(horizon));
    Table table{"fclt", {"n", "ks", "critical_5pct", "a_n", "sample_median", "reference_median"}, {}};
    json per_n = json::array();

    for (std::size_t g = 0; g < cfg.n_grid.size(); ++g) {
        const std::size_t n = cfg.n_grid[g];
        const double a_n = normalizer_a(tail, static_cast<double>(n));
        std::vector<double> sample(reps);
        std::vector<double> reference(ref_reps);
        parallel_for(reps, workers, [&](std::size_t rep) {
            RandomStream coeff_rng = RandomStream::derive(cfg.seed, {fclt_tag, g, rep, coefficients});
            RandomStream innov_rng = RandomStream::derive(cfg.seed, {fclt_tag, g, rep, innovations});
            const CoeffDraw draw = draw_coefficients(cfg.coeffs, horizon, coeff_rng);
            const auto window = InnovationWindow::sample(tail, 1 - k, static_cast<std::ptrdiff_t>(n), innov_rng);
            const auto x = build_ma_series(draw, window, n);
            sample[rep] = compensated_sum(x) / a_n;
        });
        parallel_for(ref_reps, workers, [&](std::size_t rep) {
            RandomStream coeff_rng = RandomStream::derive(cfg.seed, {fclt_tag, g, rep, reference_coefficients});
            RandomStream limit_rng = RandomStream::derive(cfg.seed, {fclt_tag, g, rep, reference_limit});
            const CoeffDraw draw = draw_coefficients(cfg.coeffs, horizon, coeff_rng);
            reference[rep] = draw.total * sample_stable(triple, limit_rng);
        });
        const double ks = ks_two_sample(sample, reference);
        const double crit = ks_critical_5pct(reps, ref_reps);
        const double med_s = quantile(sample, 0.5);
        const double med_r = quantile(reference, 0.5);
        table.rows.push_back({static_cast<double>(n), ks, crit, a_n, med_s, med_r});
        per_n.push_back({{"n", n}, {"ks", ks}, {"critical_5pct", crit}, {"a_n", a_n}});
    }
    const double final_ks = table.rows.back()[1];
    report.pass = final_ks <= cfg.thresholds.ks;
    report.summary = {{"config", to_json(cfg)},
                      {"per_n", per_n},
                      {"final_ks", final_ks},
                      {"threshold", cfg.thresholds.ks},
                      {"limit", {{"alpha", triple.alpha()}, {"p", triple.p()}, {"r", triple.r()}, {"b", triple.b()}}}};
    report.tables.push_back(std::move(table));
    report.wall_time_seconds = seconds_since(start);
    return report;
}

Report run_metric_gap_experiment(const ExperimentConfig& cfg, unsigned workers) {
    const auto start = Clock::now();
    cfg.validate();
    const std::size_t horizon = coefficient_horizon(cfg);
    const auto k = static_cast<std::ptrdiff_t>(horizon);
    const bool finite = is_finite_order(cfg.coeffs);
    const TailSpec& tail = cfg.tail;
    const auto reps = static_cast<std::size_t>(cfg.reps);

    Report report;
    report.experiment = "metric-gap";
    report.seed = cfg.seed;
    report.assumptions = base_assumptions();
    report.assumptions.push_back("C V_n^Z and V_n share the innovation window and the coefficient draw");
    report.assumptions.push_back("coefficient horizon K = " + std::to_string(horizon));
    Table table{"metric_gap",
                {"n", "gap_q25", "gap_q50", "gap_q90", "uniform_q50", "ordering_violations", "truncation_gap_q50", "q"},
                {}};
    json per_n = json::array();
    std::size_t total_violations = 0;

    for (std::size_t g = 0; g < cfg.n_grid.size(); ++g) {
        const std::size_t n = cfg.n_grid[g];
        const double a_n = normalizer_a(tail, static_cast<double>(n));
        const std::size_t q = std::min(cfg.q_schedule.at(n), horizon);
        std::vector<double> gap(reps);
        std::vector<double> uniform(reps);
        std::vector<double> trunc(finite ? 0 : reps);
        parallel_for(reps, workers, [&](std::size_t rep) {
            RandomStream coeff_rng = RandomStream::derive(cfg.seed, {gap_tag, g, rep, coefficients});
            RandomStream innov_rng = RandomStream::derive(cfg.seed, {gap_tag, g, rep, innovations});
            const CoeffDraw draw = draw_coefficients(cfg.coeffs, horizon, coeff_rng);
            const auto window = InnovationWindow::sample(tail, 1 - k, static_cast<std::ptrdiff_t>(n), innov_rng);
            const StepPath v = partial_sum_path(build_ma_series(draw, window, n), a_n);
            const StepPath vz = partial_sum_path(innovation_series(window, n), a_n).scaled(draw.total);
            gap[rep] = d_m2(vz, v, cfg.metric_tol);
            uniform[rep] = d_uniform(vz, v);
            if (!finite) {
                const StepPath vq = partial_sum_path(truncated_ma_series(draw, q, window, n), a_n);
                trunc[rep] = d_m2(vq, v, cfg.metric_tol);
            }
        });
        std::size_t violations = 0;
        for (std::size_t i = 0; i < reps; ++i)
            if (gap[i] < 0.0 || gap[i] > uniform[i] + cfg.metric_tol) ++violations;
        total_violations += violations;
        const double q25 = quantile(gap, 0.25);
        const double q50 = quantile(gap, 0.5);
        const double q90 = quantile(gap, 0.9);
        const double u50 = quantile(uniform, 0.5);
        const double t50 = finite ? 0.0 : quantile(trunc, 0.5);
        table.rows.push_back({static_cast<double>(n), q25, q50, q90, u50, static_cast<double>(violations), t50,
                              static_cast<double>(finite ? horizon : q)});
        json row = {{"n", n},           {"gap_q25", q25},  {"gap_q50", q50}, {"gap_q90", q90},
                    {"uniform_q50", u50}, {"ordering_violations", violations}};
        if (!finite) {
            row["truncation_gap_q50"] = t50;
            row["q"] = q;
        }
        per_n.push_back(row);
    }
    const double first = table.rows.front()[2];
    const double last = table.rows.back()[2];
    const bool decreasing = cfg.n_grid.size() < 2 || last < first;
    report.pass = decreasing && last < cfg.thresholds.gap_median && total_violations == 0;
    report.summary = {{"config", to_json(cfg)},
                      {"per_n", per_n},
                      {"median_first", first},
                      {"median_last", last},
                      {"median_decreasing", decreasing},
                      {"threshold", cfg.thresholds.gap_median},
                      {"ordering_violations", total_violations}};
    report.tables.push_back(std::move(table));
    report.wall_time_seconds = seconds_since(start);
    return report;
}

StepPath simulate_partial_sum_path(const ExperimentConfig& cfg, std::size_t n, std::uint64_t replication) {
    if (n == 0) throw ConfigError("n must be positive");
    const std::size_t horizon = coefficient_horizon(cfg);
    RandomStream coeff_rng = RandomStream::derive(cfg.seed, {path_tag, n, replication, coefficients});
    RandomStream innov_rng = RandomStream::derive(cfg.seed, {path_tag, n, replication, innovations});
    const CoeffDraw draw = draw_coefficients(cfg.coeffs, horizon, coeff_rng);
    const auto window =
        InnovationWindow::sample(cfg.tail, 1 - static_cast<std::ptrdiff_t>(horizon), static_cast<std::ptrdiff_t>(n), innov_rng);
    return partial_sum_path(build_ma_series(draw, window, n), normalizer_a(cfg.tail, static_cast<double>(n)));
}

Report run_appendix_check(const TailSpec& tail, std::span<const double> n_grid) {
    const auto start = Clock::now();
    if (tail.alpha() < 1.0) throw DomainError("the appendix rate check needs alpha >= 1");
    if (n_grid.empty()) throw ConfigError("n_grid must not be empty");
    const bool closed_form = tail.sv().kind == SlowVariation::constant;

    Report report;
    report.experiment = "appendix";
    report.assumptions = base_assumptions();
    report.assumptions.push_back("q_n = floor(n^(1/10)), computed in exact integer arithmetic");
    Table table{"appendix", {"n", "q_n", "a_n", "value", "reduction", "rel_error"}, {}};
    json rows = json::array();
    bool decreasing = true;
    bool matches = true;
    double previous = std::numeric_limits<double>::infinity();
    for (double n : n_grid) {
        const double q = static_cast<double>(tenth_root_floor(n));
        const double a = normalizer_a(tail, n);
        const double t = tail_prob(tail, a / q);
        const double value = n * q * q * t * t;
        double reduction = std::nan("");
        double rel = std::nan("");
        if (closed_form) {
            reduction = std::pow(q, 2.0 + 2.0 * tail.alpha()) / n;
            rel = std::abs(value - reduction) / reduction;
            if (!(rel <= 1e-12)) matches = false;
        }
        if (!(value < previous)) decreasing = false;
        previous = value;
        table.rows.push_back({n, q, a, value, reduction, rel});
        json row = {{"n", n}, {"q_n", q}, {"a_n", a}, {"value", value}};
        if (closed_form) {
            row["reduction"] = reduction;
            row["rel_error"] = rel;
        }
        rows.push_back(row);
    }
    report.pass = decreasing && matches;
    report.summary = {{"tail", to_json(tail)}, {"rows", rows}, {"strictly_decreasing", decreasing}};
    if (closed_form) report.summary["matches_reduction"] = matches;
    report.tables.push_back(std::move(table));
    report.wall_time_seconds = seconds_since(start);
    return report;
}

Report run_karamata_table(const TailSpec& tail, double exponent, TruncationSide side, std::span<const double> n_grid) {
    const auto start = Clock::now();
    if (n_grid.empty()) throw ConfigError("n_grid must not be empty");
    const double limit = truncated_moment_limit(tail.alpha(), exponent, side);
    Report report;
    report.experiment = "karamata";
    report.assumptions = base_assumptions();
    Table table{"karamata", {"n", "value", "limit", "rel_error"}, {}};
    json rows = json::array();
    for (double n : n_grid) {
        const double v = truncated_moment(tail, n, exponent, side);
        const double rel = std::abs(v - limit) / limit;
        table.rows.push_back({n, v, limit, rel});
        rows.push_back({{"n", n}, {"value", v}, {"rel_error", rel}});
    }
    const double final_rel = table.rows.back()[3];
    report.pass = final_rel <= 0.02;
    report.summary = {{"tail", to_json(tail)},
                      {"exponent", exponent},
                      {"side", side == TruncationSide::le ? "le" : "gt"},
                      {"limit", limit},
                      {"rows", rows},
                      {"final_rel_error", final_rel},
                      {"threshold", 0.02}};
    report.tables.push_back(std::move(table));
    report.wall_time_seconds = seconds_since(start);
    return report;
}

Report run_coefficient_check(const ExperimentConfig& cfg) {
    const auto start = Clock::now();
    cfg.validate();
    const std::size_t horizon = cfg.horizon ? *cfg.horizon : auto_horizon(cfg.coeffs, 64);
    RandomStream draw_rng = RandomStream::derive(cfg.seed, {coeff_tag, 0, 0, coefficients});
    const CoeffDraw draw = draw_coefficients(cfg.coeffs, horizon, draw_rng);
    std::vector<double> values = draw.values;
    if (draw.tail_value != 0.0) values.push_back(draw.tail_value);
    const SandwichVerdict sandwich = check_sandwich(values);

    RandomStream mc_rng = RandomStream::derive(cfg.seed, {coeff_tag, 0, 0, innovations});
    const DiagnosticsReport diag =
        moment_diagnostics(cfg.coeffs, cfg.exponents, cfg.n_grid, cfg.mc_reps, mc_rng, cfg.thresholds.tail_condition);

    Report report;
    report.experiment = "check-coeffs";
    report.seed = cfg.seed;
    report.assumptions = base_assumptions();
    report.assumptions.push_back(
        "the tail-moment condition passes when it decreases strictly over at least three grid points and ends below "
        "the configured threshold");
    Table table{"coefficients",
                {"n", "delta_sum", "delta_se", "gamma_sum", "gamma_se", "tail_condition", "tail_condition_se"},
                {}};
    for (const MomentRow& r : diag.rows)
        table.rows.push_back({static_cast<double>(r.n), r.delta_sum.value, r.delta_sum.std_error, r.gamma_sum.value,
                              r.gamma_sum.std_error, r.tail_condition.value, r.tail_condition.std_error});
    const char* sandwich_name = sandwich == SandwichVerdict::holds       ? "holds"
                                : sandwich == SandwichVerdict::violated ? "violated"
                                                                         : "indeterminate";
    report.summary = {{"model", to_json(cfg.coeffs)},
                      {"horizon", horizon},
                      {"total", draw.total},
                      {"tail_bound", draw.tail_bound},
                      {"sandwich", sandwich_name},
                      {"delta_moments", to_string(diag.delta_moments)},
                      {"gamma_moments", to_string(diag.gamma_moments)},
                      {"tail_condition", to_string(diag.tail_condition)},
                      {"exponents",
                       {{"delta", cfg.exponents.delta}, {"gamma", cfg.exponents.gamma}, {"eta", cfg.exponents.eta}}}};
    report.pass = sandwich == SandwichVerdict::holds && diag.delta_moments == Verdict::pass &&
                  diag.gamma_moments == Verdict::pass && diag.tail_condition == Verdict::pass;
    report.tables.push_back(std::move(table));
    report.wall_time_seconds = seconds_since(start);
    return report;
}

}  // namespace mafclt
