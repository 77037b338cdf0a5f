#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mafclt/random.hpp"

namespace mafclt {

/// Deterministic coefficients given as an explicit finite list.
struct FiniteCoefficients {
    std::vector<double> values;
};

/// Deterministic C_j = scale * ratio^j, |ratio| < 1.
struct GeometricCoefficients {
    double scale = 1.0;
    double ratio = 0.5;
};

/// Deterministic C_j = scale * (j + 1)^{-exponent}, exponent > 1.
struct PowerCoefficients {
    double scale = 1.0;
    double exponent = 2.0;
};

enum class BaseLaw { uniform, bernoulli };

/// Random C_j = scale * rho^j * xi_j with xi_j iid on [0, 1]
/// (uniform, or Bernoulli(1/2) on {0, 1}). |C_j| <= scale * rho^j a.s.
struct IidScaledCoefficients {
    BaseLaw base = BaseLaw::uniform;
    double scale = 1.0;
    double rho = 0.5;
};

/// The single-spike counterexample sequence: omega ~ U(0,1) and
/// C_i = i * 1{omega in (S_{i-1}, S_i]}, i >= 1, C_0 = 0, where S_k are the
/// normalized partial sums of j^{-(1+delta+epsilon)}. Requires delta + epsilon < gamma.
struct SpikeCoefficients {
    double delta = 0.3;
    double epsilon = 0.1;
    double gamma = 0.5;
};

using CoeffModel =
    std::variant<FiniteCoefficients, GeometricCoefficients, PowerCoefficients, IidScaledCoefficients, SpikeCoefficients>;

/// Throws ConfigError when a model's parameters are out of range.
void validate(const CoeffModel& model);

[[nodiscard]] bool is_deterministic(const CoeffModel& model);
/// Finitely many nonzero coefficients.
[[nodiscard]] bool is_finite_order(const CoeffModel& model);
[[nodiscard]] std::string model_name(const CoeffModel& model);

/// E|C_j|^s in closed form, when known.
std::optional<double> abs_moment(const CoeffModel& model, std::size_t j, double s);

/// Whether sum_j E|C_j|^s is finite, when decidable in closed form.
std::optional<bool> moment_series_converges(const CoeffModel& model, double s);

/// Normalizing constant S = sum_{j>=1} j^{-(1+delta+epsilon)} of the spike model.
double spike_normalizer(const SpikeCoefficients& model);

/// One realization C_0..C_K of a coefficient sequence.
struct CoeffDraw {
    std::vector<double> values;
    /// C = sum of all coefficients, including tail_value.
    double total = 0.0;
    /// Sum_{j > K} C_j when known exactly, otherwise 0 (with |error| <= tail_bound).
    double tail_value = 0.0;
    /// Certified bound on sum_{j > K} |C_j|.
    double tail_bound = 0.0;
    bool tail_exact = true;

    [[nodiscard]] std::size_t horizon() const { return values.empty() ? 0 : values.size() - 1; }
};

CoeffDraw draw_coefficients(const CoeffModel& model, std::size_t horizon, RandomStream& rng);

/// Smallest horizon K >= min_horizon whose certified tail bound is at most
/// 1e-8 * (sum_{j<=K} |C_j| + 1). Finite lists return their last index; the
/// spike model carries its tail exactly and returns min_horizon.
std::size_t auto_horizon(const CoeffModel& model, std::size_t min_horizon = 0);

enum class SandwichVerdict { holds, violated, indeterminate };

/// Whether every partial sum lies between 0 and the total sum:
/// 0 <= sum_{i<=s} C_i / sum_i C_i <= 1 for all s. A total that vanishes
/// relative to sum |C_i| yields `indeterminate`.
SandwichVerdict check_sandwich(std::span<const double> values);

struct TailSums {
    /// C'_q = sum_{j>=q} C_j.
    double c_prime;
    /// C''_q = C'_q - C_q = sum_{j>q} C_j.
    double c_double_prime;
    /// Bound on the error of both sums from the unobserved tail.
    double error_bound;
};

/// Tail sums of a draw; throws DomainError for q > K.
TailSums tail_sum(const CoeffDraw& draw, std::size_t q);

struct MomentExponents {
    double delta;
    double gamma;
    double eta;
};

enum class Verdict { pass, fail, inconclusive };

std::string to_string(Verdict v);

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    bool analytic = false;
};

struct MomentRow {
    std::size_t n = 0;
    /// sum_{j<=n} E|C_j|^delta
    Estimate delta_sum;
    /// sum_{j<=n} E|C_j|^gamma
    Estimate gamma_sum;
    /// (ln n)^{1+eta} E[(sum_{i>=n}|C_i|)^{eta-delta} sum_{j>=n}|C_j|^delta]
    Estimate tail_condition;
};

struct DiagnosticsReport {
    MomentExponents exponents{};
    std::vector<MomentRow> rows;
    Verdict delta_moments = Verdict::inconclusive;
    Verdict gamma_moments = Verdict::inconclusive;
    Verdict tail_condition = Verdict::inconclusive;
};

/// Estimates the moment sums and the tail condition on a grid of n, by closed
/// form where available and Monte Carlo otherwise, and classifies each
/// condition. The tail condition passes when it decreases strictly over at
/// least three grid points and ends below `threshold`.
DiagnosticsReport moment_diagnostics(const CoeffModel& model, const MomentExponents& exponents,
                                     std::span<const std::size_t> n_grid, int mc_reps, RandomStream& rng,
                                     double threshold = 0.1);

}  // namespace mafclt
