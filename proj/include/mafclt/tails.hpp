#pragma once

#include <span>

#include "mafclt/random.hpp"

namespace mafclt {

enum class SlowVariation { constant, log };

/// Slowly varying factor L(x) = c * (1 v ln x)^beta; beta is ignored for the
/// constant kind.
struct SlowlyVarying {
    SlowVariation kind = SlowVariation::constant;
    double c = 1.0;
    double beta = 0.0;

    [[nodiscard]] double operator()(double x) const;

    static SlowlyVarying constant(double c = 1.0) { return {SlowVariation::constant, c, 0.0}; }
    static SlowlyVarying log(double beta, double c = 1.0) { return {SlowVariation::log, c, beta}; }
};

/// Law of one innovation Z: a two-sided Pareto-type variable with
///
///     P(|Z| > x) = 1                          for x < x_min
///     P(|Z| > x) = min(1, x^{-alpha} L(x))    for x >= x_min
///
/// and an independent sign, + with probability p and - with probability r.
/// A centered law has the analytic mean of the uncentered one subtracted.
class TailSpec {
public:
    /// Throws ConfigError when an invariant fails: alpha outside (0,2),
    /// p outside [0,1], alpha = 1 without symmetry, alpha in (1,2) without
    /// centering, centering with alpha <= 1, or a log factor that makes the
    /// tail increase above x_min.
    TailSpec(double alpha, double p, SlowlyVarying sv = {}, double x_min = 1.0,
             bool centered = false, bool symmetric = false);

    /// Convenience constructor deriving the regularity flags from alpha:
    /// centered when alpha > 1, symmetric (p = 1/2) when alpha = 1.
    static TailSpec regular(double alpha, double p, SlowlyVarying sv = {}, double x_min = 1.0);

    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] double p() const { return p_; }
    [[nodiscard]] double r() const { return r_; }
    [[nodiscard]] const SlowlyVarying& sv() const { return sv_; }
    [[nodiscard]] double x_min() const { return x_min_; }
    [[nodiscard]] bool centered() const { return centered_; }
    [[nodiscard]] bool symmetric() const { return symmetric_; }

    /// Smallest x at which the tail drops below one; |Z| >= support_start() a.s.
    [[nodiscard]] double support_start() const { return x0_; }

    /// Amount subtracted from each draw: (p - r) E|Z| for centered laws, else 0.
    [[nodiscard]] double centering() const { return centering_; }

private:
    double alpha_;
    double p_;
    double r_;
    SlowlyVarying sv_;
    double x_min_;
    bool centered_;
    bool symmetric_;
    double x0_;
    double centering_ = 0.0;
};

/// P(|Z| > x) of the uncentered magnitude. Throws DomainError for x <= 0.
double tail_prob(const TailSpec& spec, double x);

/// Generalized inverse of the tail: inf{x : tail_prob(x) <= u}, u in (0,1].
double magnitude_quantile(const TailSpec& spec, double u);

/// E|Z| of the uncentered law (finite only for alpha > 1).
double mean_magnitude(const TailSpec& spec);

/// The constant subtracted by a centered law: the mean (p - r) E|Z| of the
/// uncentered law. Throws DomainError for alpha <= 1.
double centering_constant(const TailSpec& spec);

/// Analytic mean of the law sample_innovation draws from (alpha > 1 only).
double innovation_mean(const TailSpec& spec);

/// Signed magnitude for a given inverse-CDF input `u` and sign, before centering.
double innovation_from_uniform(const TailSpec& spec, double u, bool positive);

double sample_innovation(const TailSpec& spec, RandomStream& rng);

/// a_n with n * P(|Z| > a_n) = 1. `n` is real so astronomically large
/// sample sizes remain expressible.
double normalizer_a(const TailSpec& spec, double n);

enum class TruncationSide { le, gt };

/// n E|Z/a_n|^e 1{|Z| <= a_n} (side le, requires e > alpha) or
/// n E|Z/a_n|^e 1{|Z| > a_n} (side gt, requires 0 < e < alpha).
double truncated_moment(const TailSpec& spec, double n, double exponent, TruncationSide side);

/// Limit of truncated_moment as n grows: alpha/(e - alpha) or alpha/(alpha - e).
double truncated_moment_limit(double alpha, double exponent, TruncationSide side);

struct TailBalance {
    double p;
    double r;
};

/// Empirical tail balance at level x: fractions of exceedances |z| > x that
/// are positive (z > x) and negative (z <= -x). Throws EstimationError when
/// no value exceeds x.
TailBalance tail_balance_estimate(std::span<const double> sample, double x);

}  // namespace mafclt
