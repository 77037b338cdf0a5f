#include "mafclt/stable_limit.hpp"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <string>

#include "mafclt/errors.hpp"
#include "mafclt/summation.hpp"

namespace mafclt {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

// (sin(u) - u) / u^3 without cancellation for small u.
double sin_minus_identity_cubed(double u) {
    if (std::abs(u) < 0.1) {
        const double u2 = u * u;
        return -1.0 / 6.0 + u2 * (1.0 / 120.0 + u2 * (-1.0 / 5040.0 + u2 * (1.0 / 362880.0)));
    }
    return (std::sin(u) - u) / (u * u * u);
}

double sinc(double u) { return std::abs(u) < 1e-8 ? 1.0 : std::sin(u) / u; }

// J(theta) = int_0^inf (e^{i theta x} - 1 - i theta x 1{x <= 1}) alpha x^{-alpha-1} dx, theta > 0.
std::complex<double> one_sided_exponent(double alpha, double theta, double quad_tol) {
    const double goal = std::clamp(quad_tol / 10.0, 1e-14, 1e-4);
    boost::math::quadrature::tanh_sinh<double> inner;
    double err_re = 0.0;
    double err_im = 0.0;
    const double inner_re = inner.integrate(
        [&](double x) {
            if (x <= 0.0) return 0.0;
            // Small-x powers are pulled out so the integrand stays finite at x -> 0.
            const double s = 0.5 * theta * sinc(0.5 * theta * x);
            return -2.0 * s * s * alpha * std::pow(x, 1.0 - alpha);
        },
        0.0, 1.0, goal, &err_re);
    const double inner_im = inner.integrate(
        [&](double x) {
            if (x <= 0.0) return 0.0;
            return theta * theta * theta * sin_minus_identity_cubed(theta * x) * alpha * std::pow(x, 2.0 - alpha);
        },
        0.0, 1.0, goal, &err_im);

    // On [1, inf) substitute x = 1 + t and expand cos/sin(theta (1 + t)).
    auto weight = [alpha](double t) { return alpha * std::pow(1.0 + t, -alpha - 1.0); };
    boost::math::quadrature::ooura_fourier_cos<double> fcos(goal);
    boost::math::quadrature::ooura_fourier_sin<double> fsin(goal);
    const auto [c, c_rel] = fcos.integrate(weight, theta);
    const auto [s, s_rel] = fsin.integrate(weight, theta);
    if (std::isnan(c_rel) || std::isnan(s_rel))
        throw NumericError("levy_exponent: oscillatory tail integral did not converge at theta = " +
                           std::to_string(theta));
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    // int_1^inf alpha x^{-alpha-1} dx = 1.
    const double outer_re = ct * c - st * s - 1.0;
    const double outer_im = st * c + ct * s;

    const double error = err_re + err_im + (c_rel * std::abs(c) + s_rel * std::abs(s)) * 2.0;
    const double scale = std::max(1.0, std::abs(std::complex<double>(inner_re + outer_re, inner_im + outer_im)));
    if (!(error <= quad_tol * scale))
        throw NumericError("levy_exponent: estimated quadrature error " + std::to_string(error) +
                           " exceeds tolerance " + std::to_string(quad_tol) + " at theta = " + std::to_string(theta) +
                           ", alpha = " + std::to_string(alpha));
    return {inner_re + outer_re, inner_im + outer_im};
}

}  // namespace

double drift_b(double alpha, double p, double r) {
    if (alpha == 1.0) return 0.0;
    return (p - r) * alpha / (1.0 - alpha);
}

CharTriple::CharTriple(double alpha, double p, double r) : alpha_(alpha), p_(p), r_(r), b_(drift_b(alpha, p, r)) {}

CharTriple CharTriple::make(double alpha, double p, double r) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw ConfigError("stable index alpha must lie in (0,2)");
    if (!(p >= 0.0 && p <= 1.0 && r >= 0.0 && r <= 1.0)) throw ConfigError("tail balances must lie in [0,1]");
    if (std::abs(p + r - 1.0) > 1e-12) throw ConfigError("tail balances must satisfy p + r = 1");
    if (alpha == 1.0 && p != r) throw ConfigError("alpha = 1 requires a symmetric triple (p = r)");
    return {alpha, p, r};
}

std::complex<double> levy_exponent(const CharTriple& triple, double theta, double quad_tol) {
    if (!(quad_tol > 0.0)) throw DomainError("levy_exponent: quad_tol must be positive");
    if (theta == 0.0) return {0.0, 0.0};
    // The negative half-line contributes J(-theta) = conj(J(theta)).
    const std::complex<double> j = one_sided_exponent(triple.alpha(), std::abs(theta), quad_tol);
    std::complex<double> psi = triple.p() * j + triple.r() * std::conj(j);
    if (theta < 0.0) psi = std::conj(psi);
    return psi + std::complex<double>(0.0, triple.b() * theta);
}

StableParameters stable_parameters(const CharTriple& triple) {
    const double a = triple.alpha();
    if (a == 1.0) return {1.0, 0.0, kPi / 2.0, 0.0};
    // Exponent matching: the drift b exactly cancels the compensator, so no shift remains.
    const double scale_pow = boost::math::tgamma(1.0 - a) * std::cos(kPi * a / 2.0);
    return {a, triple.p() - triple.r(), std::pow(scale_pow, 1.0 / a), 0.0};
}

double sample_stable(const CharTriple& triple, RandomStream& rng) {
    const StableParameters sp = stable_parameters(triple);
    const double v = kPi * (rng.uniform_open() - 0.5);
    if (sp.alpha == 1.0) return sp.scale * std::tan(v);
    const double w = rng.exponential();
    const double a = sp.alpha;
    const double tan_term = sp.skew * std::tan(kPi * a / 2.0);
    const double b = std::atan(tan_term) / a;
    const double s = std::pow(1.0 + tan_term * tan_term, 1.0 / (2.0 * a));
    const double x = s * std::sin(a * (v + b)) / std::pow(std::cos(v), 1.0 / a) *
                     std::pow(std::cos(v - a * (v + b)) / w, (1.0 - a) / a);
    return sp.scale * x + sp.shift;
}

StepPath sample_levy_path(const CharTriple& triple, std::size_t steps, RandomStream& rng) {
    if (steps == 0) throw DomainError("sample_levy_path: steps must be >= 1");
    const double factor = std::pow(static_cast<double>(steps), -1.0 / triple.alpha());
    std::vector<double> values(steps + 1, 0.0);
    CompensatedSum acc;
    for (std::size_t k = 1; k <= steps; ++k) {
        acc.add(factor * sample_stable(triple, rng));
        values[k] = acc.value();
    }
    return {steps, std::move(values)};
}

}  // namespace mafclt
