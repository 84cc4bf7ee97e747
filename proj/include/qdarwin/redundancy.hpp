#pragma once

#include <vector>

#include "qdarwin/branch.hpp"
#include "qdarwin/subsets.hpp"

namespace qdarwin {

/// Smallest captured factor d_r with I(d_r) = (1 - delta)/2 * I_total, where
/// I(d) = H(P0, d_S) + H(P0, d) - H(P0, d_S - d) and I_total = 2 H(P0, d_S).
/// Bisection to 1e-10 relative; the returned value is the upper bracket, so
/// I(d_r) never falls short of the threshold. d_S = +inf solves
/// H(P0, d_r) = (1 - delta) H(P0, inf).
double critical_d(double p0, double d_total, double delta);

/// Idealized (infinitely divisible) redundancy d_S / d_r - 1. Each infinite
/// factor anchors one part; finite factors then contribute
/// floor(sum_finite / d_r) more. -1 when the environment holds no information.
double redundancy_infdiv(const DecoherenceProfile& profile, double delta);

/// Same, for an externally fixed threshold d_r.
double redundancy_infdiv_at(const DecoherenceProfile& profile, double d_r);

/// Greedy cover: environments sorted by factor (descending) fill parts until
/// each reaches d_r. Leftovers are merged into the last complete part. Returns
/// only complete parts.
std::vector<EnvMask> greedy_partition(const DecoherenceProfile& profile, double d_r);

struct RedundancyReport {
  double delta = 0.0;
  double d_r = 0.0;
  double r_infdiv = 0.0;  // idealized redundancy (parts - 1)
  int r_partition = 0;    // greedy count of qualifying parts K
  std::vector<EnvMask> parts;

  /// R_delta = K - 1 from the greedy witness.
  int redundancy() const { return r_partition - 1; }
};

RedundancyReport redundancy_partition(const DecoherenceProfile& profile, double delta);

}  // namespace qdarwin
