#pragma once

#include <complex>
#include <cstddef>

#include "mafclt/ma_paths.hpp"
#include "mafclt/random.hpp"

namespace mafclt {

/// b = 0 for alpha = 1, (p - r) alpha / (1 - alpha) otherwise.
double drift_b(double alpha, double p, double r);

/// Characteristic triple (0, mu, b) of the stable limit, with Levy measure
/// mu(dx) = (p 1{x > 0} + r 1{x < 0}) alpha |x|^{-alpha-1} dx and the drift
/// fixed by (alpha, p, r).
class CharTriple {
public:
    /// Throws ConfigError for alpha outside (0,2), p or r outside [0,1],
    /// p + r != 1, or an asymmetric triple with alpha = 1.
    static CharTriple make(double alpha, double p, double r);

    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] double p() const { return p_; }
    [[nodiscard]] double r() const { return r_; }
    [[nodiscard]] double b() const { return b_; }

private:
    CharTriple(double alpha, double p, double r);

    double alpha_;
    double p_;
    double r_;
    double b_;
};

/// psi(theta) = int (e^{i theta x} - 1 - i theta x 1{|x| <= 1}) mu(dx) + i b theta,
/// by quadrature on (0,1] and a Fourier-type rule on [1, inf). Throws
/// NumericError when the estimated error exceeds quad_tol * max(1, |psi|).
std::complex<double> levy_exponent(const CharTriple& triple, double theta, double quad_tol = 1e-8);

/// Parameters of the same law in the form
/// E exp(i theta X) = exp(-scale^alpha |theta|^alpha (1 - i skew sgn(theta) tan(pi alpha / 2)) + i shift theta)
/// for alpha != 1, and exp(-scale |theta|) (Cauchy) for the symmetric alpha = 1 case.
struct StableParameters {
    double alpha;
    double skew;
    double scale;
    double shift;
};

StableParameters stable_parameters(const CharTriple& triple);

/// One draw of V(1) by the Chambers-Mallows-Stuck construction.
double sample_stable(const CharTriple& triple, RandomStream& rng);

/// V on the grid k/steps: V(0) = 0 and iid increments distributed as
/// V(1/steps) = steps^{-1/alpha} V(1) (the law is strictly stable).
StepPath sample_levy_path(const CharTriple& triple, std::size_t steps, RandomStream& rng);

}  // namespace mafclt
