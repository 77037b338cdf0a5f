#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mafclt/coefficients.hpp"
#include "mafclt/random.hpp"
#include "mafclt/tails.hpp"

namespace mafclt {

/// Innovations Z_first..Z_last stored contiguously; indices may be negative
/// so that moving averages can look back before time 1.
class InnovationWindow {
public:
    InnovationWindow(std::ptrdiff_t first, std::vector<double> values);

    /// Draws Z_first..Z_last iid from `spec`, in index order.
    static InnovationWindow sample(const TailSpec& spec, std::ptrdiff_t first, std::ptrdiff_t last, RandomStream& rng);

    [[nodiscard]] std::ptrdiff_t first() const { return first_; }
    [[nodiscard]] std::ptrdiff_t last() const { return first_ + static_cast<std::ptrdiff_t>(values_.size()) - 1; }
    [[nodiscard]] bool covers(std::ptrdiff_t from, std::ptrdiff_t to) const { return from >= first() && to <= last(); }
    [[nodiscard]] double operator[](std::ptrdiff_t i) const { return values_[static_cast<std::size_t>(i - first_)]; }
    /// Checked access; throws DomainError outside the window.
    [[nodiscard]] double at(std::ptrdiff_t i) const;
    [[nodiscard]] std::span<const double> values() const { return values_; }
    /// max |Z_i| over the window.
    [[nodiscard]] double max_abs() const;

private:
    std::ptrdiff_t first_;
    std::vector<double> values_;
};

/// Right-continuous step function on [0,1], constant on [k/n, (k+1)/n),
/// with path(t) = values[floor(n t)] and path(1) = values[n].
struct StepPath {
    std::size_t n = 0;
    std::vector<double> values;

    StepPath() = default;
    /// Throws DomainError unless values.size() == n + 1 and n >= 1.
    StepPath(std::size_t n, std::vector<double> values);

    [[nodiscard]] double operator()(double t) const;
    [[nodiscard]] StepPath scaled(double c) const;
    [[nodiscard]] StepPath shifted(double c) const;
};

/// CSV with header `k,k/n,value`, one row per grid point.
void write_csv(std::ostream& out, const StepPath& path);
void write_csv(const std::string& file, const StepPath& path);
/// Reads the format written by write_csv. Rows must be k = 0..n in order;
/// n is recovered from the last row. Throws ConfigError on malformed input.
StepPath read_csv(std::istream& in);
StepPath read_csv(const std::string& file);

/// X_1..X_n with X_i = sum_{j=0}^{K} C_j Z_{i-j}. The window must cover 1-K..n.
std::vector<double> build_ma_series(const CoeffDraw& draw, const InnovationWindow& window, std::size_t n);

/// Bound on |X_i - full series| caused by the finite horizon, for every i.
double truncation_error_bound(const CoeffDraw& draw, const InnovationWindow& window);

/// X^q_i = sum_{j<q} C_j Z_{i-j} + C'_q Z_{i-q}: lags beyond q folded into lag q.
/// Requires q <= K; the window must cover 1-q..n.
std::vector<double> truncated_ma_series(const CoeffDraw& draw, std::size_t q, const InnovationWindow& window,
                                        std::size_t n);

/// v_0 = 0, v_k = (1/a_n) sum_{i<=k} series_i, summed with compensation.
StepPath partial_sum_path(std::span<const double> series, double a_n);

/// Z_1..Z_n of a window as a vector, for innovation-only paths.
std::vector<double> innovation_series(const InnovationWindow& window, std::size_t n);

/// Which exact identity to evaluate for a finite-order filter C_0..C_q.
enum class DecompositionCase {
    /// k < q: difference of C-scaled innovations and the MA over the first k steps.
    short_prefix,
    /// k >= q: same difference, split into a recent-innovation term and a pre-sample term.
    long_prefix,
    /// q <= k <= n - q: MA summed q steps further, split into pre-sample and look-ahead terms.
    lagged,
};

struct Decomposition {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    /// sum_{u<q} Z_{k-u}/a_n sum_{s=u+1}^{q} C_s (long_prefix only).
    std::optional<double> recent;
    /// sum_{u<q} Z_{-u}/a_n sum_{s=u+1}^{q} C_s (long_prefix and lagged).
    std::optional<double> presample;
    /// sum_{u=1}^{q} Z_{k+u}/a_n sum_{s=0}^{q-u} C_s (lagged only).
    std::optional<double> lookahead;
};

/// Evaluates both sides of the exact identity for the partial sums of a
/// moving average of order q = coeffs.size() - 1. The left side is summed
/// directly from its definition, the right side from the closed expansion.
/// The window must cover 1-q..n. Throws DomainError when k, q, n violate
/// the case's index constraints.
Decomposition partial_sum_decomposition(DecompositionCase which, std::size_t k, std::size_t n,
                                        std::span<const double> coeffs, const InnovationWindow& window, double a_n);

}  // namespace mafclt
