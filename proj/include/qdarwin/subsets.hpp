#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>

#include "qdarwin/rng.hpp"

namespace qdarwin {

/// Bitset over environments: bit i is environment E_{i+1}. Holds up to 64.
using EnvMask = std::uint64_t;

inline constexpr int kMaxEnvironments = 64;

inline constexpr EnvMask full_env_mask(int n_env) {
  return n_env >= 64 ? ~EnvMask{0} : (EnvMask{1} << n_env) - 1;
}

/// Calls f(mask) for every m-subset of n environments, in increasing numeric
/// order (Gosper's hack).
template <typename F>
void for_each_subset(int n, int m, F&& f) {
  if (n < 0 || n > kMaxEnvironments || m < 0 || m > n) throw std::invalid_argument("bad subset size");
  if (m == 0) {
    f(EnvMask{0});
    return;
  }
  const EnvMask limit = full_env_mask(n);
  if (m == n) {
    f(limit);
    return;
  }
  EnvMask x = full_env_mask(m);
  while (true) {
    f(x);
    if (x == (limit & ~(limit >> m))) return;  // top m bits: last subset
    const EnvMask c = x & (~x + 1);
    const EnvMask r = x + c;
    x = (((r ^ x) >> 2) / c) | r;
  }
}

/// Uniformly random m-subset of n environments (Floyd's algorithm).
inline EnvMask random_subset(int n, int m, CounterRng& rng) {
  if (n < 0 || n > kMaxEnvironments || m < 0 || m > n) throw std::invalid_argument("bad subset size");
  EnvMask chosen = 0;
  for (int j = n - m; j < n; ++j) {
    const auto t = static_cast<int>(rng.below(static_cast<std::uint64_t>(j) + 1));
    chosen |= (chosen >> t) & 1U ? EnvMask{1} << j : EnvMask{1} << t;
  }
  return chosen;
}

}  // namespace qdarwin
