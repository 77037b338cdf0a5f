#include "mafclt/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "mafclt/errors.hpp"
#include "mafclt/summation.hpp"

namespace mafclt {

namespace {

// Start of the Euler-Maclaurin remainder; below it terms are summed directly.
constexpr double kEulerMaclaurinStart = 64.0;

// Sum_{k >= m} k^{-s} for m >= kEulerMaclaurinStart.
double euler_maclaurin_tail(double s, double m) {
    const double f = std::pow(m, -s);
    const double integral = m * f / (s - 1.0);
    // Bernoulli corrections B2/2!, B4/4!, B6/6! applied to odd derivatives of x^{-s}.
    const double d1 = -s * f / m;
    const double d3 = -s * (s + 1.0) * (s + 2.0) * f / (m * m * m);
    const double d5 = -s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * f / (m * m * m * m * m);
    return integral + 0.5 * f - d1 / 12.0 + d3 / 720.0 - d5 / 30240.0;
}

}  // namespace

double zeta_tail(double s, double m) {
    if (!(s > 1.0)) throw DomainError("zeta_tail: exponent must exceed 1");
    if (!(m >= 1.0)) throw DomainError("zeta_tail: start index must be >= 1");
    m = std::floor(m);
    if (m >= kEulerMaclaurinStart) return euler_maclaurin_tail(s, m);
    CompensatedSum acc;
    for (double k = m; k < kEulerMaclaurinStart; k += 1.0) acc.add(std::pow(k, -s));
    acc.add(euler_maclaurin_tail(s, kEulerMaclaurinStart));
    return acc.value();
}

double power_partial_sum(double s, double n) {
    n = std::floor(n);
    if (n < 1.0) return 0.0;
    if (s > 1.0 && n >= kEulerMaclaurinStart) {
        return zeta_tail(s, 1.0) - zeta_tail(s, n + 1.0);
    }
    if (n <= 1e7) {
        CompensatedSum acc;
        // Smallest terms first.
        for (double k = n; k >= 1.0; k -= 1.0) acc.add(std::pow(k, -s));
        return acc.value();
    }
    // Euler-Maclaurin between a direct head and n; valid for any s.
    CompensatedSum acc;
    for (double k = kEulerMaclaurinStart - 1.0; k >= 1.0; k -= 1.0) acc.add(std::pow(k, -s));
    const double a = kEulerMaclaurinStart;
    auto antiderivative = [s](double x) {
        return std::abs(s - 1.0) < 1e-15 ? std::log(x) : std::pow(x, 1.0 - s) / (1.0 - s);
    };
    auto d1 = [s](double x) { return -s * std::pow(x, -s - 1.0); };
    auto d3 = [s](double x) { return -s * (s + 1.0) * (s + 2.0) * std::pow(x, -s - 3.0); };
    acc.add(antiderivative(n) - antiderivative(a));
    acc.add(0.5 * (std::pow(a, -s) + std::pow(n, -s)));
    acc.add((d1(n) - d1(a)) / 12.0);
    acc.add(-(d3(n) - d3(a)) / 720.0);
    return acc.value();
}

double quantile(std::span<const double> sample, double level) {
    if (sample.empty()) throw DomainError("quantile: empty sample");
    if (!(level >= 0.0 && level <= 1.0)) throw DomainError("quantile: level must lie in [0,1]");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = level * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

__extension__ typedef unsigned __int128 uint128;

std::size_t tenth_root_floor(double n) {
    if (!(n >= 1.0)) throw DomainError("tenth_root_floor: n must be >= 1");
    if (n > 1e36) throw DomainError("tenth_root_floor: n exceeds the supported range");
    const auto target = static_cast<uint128>(n);
    auto pow10 = [](uint128 q) {
        uint128 v = 1;
        for (int i = 0; i < 10; ++i) v *= q;
        return v;
    };
    auto q = static_cast<uint128>(std::floor(std::pow(n, 0.1)));
    while (q > 1 && pow10(q) > target) --q;
    while (pow10(q + 1) <= target) ++q;
    return static_cast<std::size_t>(q);
}

}  // namespace mafclt
