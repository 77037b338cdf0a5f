#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mafclt {

/// Sum_{k >= m} k^{-s} for s > 1 and m >= 1 (Hurwitz-type tail of the zeta series).
/// Direct summation for small indices, Euler-Maclaurin remainder beyond.
double zeta_tail(double s, double m);

/// Sum_{k=1}^{n} k^{-s} for any real s (the series need not converge).
double power_partial_sum(double s, double n);

/// Empirical quantile with linear interpolation between order statistics
/// (Hyndman-Fan type 7). `level` in [0, 1]; the input need not be sorted.
double quantile(std::span<const double> sample, double level);

/// Integer part of n^{1/10}, exact for n up to 1e36.
std::size_t tenth_root_floor(double n);

}  // namespace mafclt
