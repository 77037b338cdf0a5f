#pragma once

#include <cstddef>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "mafclt/coefficients.hpp"
#include "mafclt/tails.hpp"

namespace mafclt {

using nlohmann::json;

/// How the truncation lag q of an infinite-order filter grows with n.
struct QSchedule {
    enum class Kind { fixed, tenth_root } kind = Kind::tenth_root;
    std::size_t q = 1;

    /// floor(n^{1/10}) for tenth_root (at least 1), the fixed q otherwise.
    [[nodiscard]] std::size_t at(std::size_t n) const;
};

struct Thresholds {
    /// Largest acceptable two-sample KS statistic at the last grid point.
    double ks = 0.05;
    /// Largest acceptable median M2 gap at the last grid point.
    double gap_median = 0.1;
    /// Bound on the final value of the tail-moment condition.
    double tail_condition = 0.1;
};

struct ExperimentConfig {
    TailSpec tail = TailSpec::regular(1.5, 0.5);
    CoeffModel coeffs = FiniteCoefficients{{1.0}};
    std::vector<std::size_t> n_grid{100};
    int reps = 200;
    /// Size of the limit-law reference sample; defaults to reps.
    int reference_reps = 0;
    std::uint64_t seed = 20240611;
    QSchedule q_schedule{};
    double metric_tol = 1e-6;
    std::string output_dir = "out";
    /// Coefficient horizon K; chosen automatically when absent.
    std::optional<std::size_t> horizon;
    Thresholds thresholds{};
    /// Exponents and Monte Carlo size for coefficient diagnostics.
    MomentExponents exponents{0.5, 0.9, 1.1};
    int mc_reps = 2000;

    /// Throws ConfigError: reps >= 2, n_grid nonempty and strictly increasing, metric_tol > 0.
    void validate() const;
    [[nodiscard]] int reference_size() const { return reference_reps > 0 ? reference_reps : reps; }
};

TailSpec tail_from_json(const json& j);
json to_json(const TailSpec& spec);

CoeffModel coeffs_from_json(const json& j);
json to_json(const CoeffModel& model);

/// Missing keys keep their defaults. Unknown keys are rejected.
ExperimentConfig config_from_json(const json& j);
json to_json(const ExperimentConfig& cfg);

ExperimentConfig load_config(const std::string& file);

}  // namespace mafclt
