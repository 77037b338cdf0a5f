#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mafclt/config.hpp"
#include "mafclt/ma_paths.hpp"

namespace mafclt {

/// sup_x |F_a(x) - F_b(x)| over the pooled sample. Throws DomainError on empty input.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic two-sample KS critical value at level 5%: 1.358 sqrt((m + n) / (m n)).
double ks_critical_5pct(std::size_t m, std::size_t n);

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct Report {
    std::string experiment;
    bool pass = false;
    std::uint64_t seed = 0;
    json summary = json::object();
    std::vector<std::string> assumptions;
    std::vector<Table> tables;
    /// Kept out of report.json so that reports are byte-identical across runs.
    double wall_time_seconds = 0.0;
};

json to_json(const Report& report);

/// Writes report.json, timing.json and one CSV per table into `dir` (created if needed).
void write_report(const Report& report, const std::string& dir);

/// Runs fn(i) for i in [0, count) on `workers` threads. Results must be
/// stored by index; the first exception is rethrown after all threads join.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);

/// Marginal reproduction at t = 1: for each n, reps draws of V_n(1) against
/// reference draws of C~ V(1) with C~ from an independent coefficient draw;
/// reports the two-sample KS statistic. Passes when the KS statistic at the
/// last grid point is within thresholds.ks.
Report run_fclt_experiment(const ExperimentConfig& cfg, unsigned workers = 1);

/// For each n, reps coupled evaluations of d_M2(C V_n^Z, V_n) (same
/// innovations, same coefficient draw), with the uniform distance alongside
/// and, for infinite-order filters, the gap to the q-truncated process.
/// Passes when the median gap decreases from the first to the last grid
/// point and ends below thresholds.gap_median.
Report run_metric_gap_experiment(const ExperimentConfig& cfg, unsigned workers = 1);

/// One draw of V_n(k/n) = a_n^{-1} sum_{i<=k} X_i for the configured filter
/// and innovations, reproducible from (seed, n, replication).
StepPath simulate_partial_sum_path(const ExperimentConfig& cfg, std::size_t n, std::uint64_t replication = 0);

/// n q_n^2 P(|Z| > a_n / q_n)^2 with q_n = floor(n^{1/10}), no sampling.
/// Requires alpha >= 1 (DomainError otherwise). Passes when the sequence is
/// strictly decreasing and, for constant slowly varying factors, matches
/// q_n^{2 + 2 alpha} / n within 1e-12 relative.
Report run_appendix_check(const TailSpec& tail, std::span<const double> n_grid);

/// Truncated moments against their limits on an n grid.
Report run_karamata_table(const TailSpec& tail, double exponent, TruncationSide side, std::span<const double> n_grid);

/// Sandwich check on one coefficient draw plus the moment diagnostics.
Report run_coefficient_check(const ExperimentConfig& cfg);

}  // namespace mafclt
