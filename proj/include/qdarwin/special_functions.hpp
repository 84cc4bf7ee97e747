#pragma once

#include <cstdint>

namespace qdarwin {

/// Largest argument for which harmonic numbers are summed term by term.
inline constexpr std::uint64_t kExactHarmonicLimit = std::uint64_t{1} << 20;

/// H_n = sum_{k=1}^n 1/k. Exact summation below kExactHarmonicLimit,
/// asymptotic expansion above.
double harmonic_number(std::uint64_t n);

/// H_hi - H_lo = sum_{k=lo+1}^{hi} 1/k without forming either harmonic number
/// when the range is summable. Requires lo <= hi.
double harmonic_difference(std::uint64_t lo, std::uint64_t hi);

/// Digamma function for real x > 0 (upward recurrence to x >= 10, then the
/// Bernoulli asymptotic series).
double digamma(double x);

/// Psi(n + 1) = H_n - gamma, evaluated through harmonic_number.
double digamma_int_plus_one(std::uint64_t n);

/// Riemann zeta at integer j >= 2, accurate to ~1 ulp.
double riemann_zeta(int j);

/// Binomial coefficient as a double; exact while the result is below 2^53.
double binomial(std::uint64_t n, std::uint64_t k);

}  // namespace qdarwin
