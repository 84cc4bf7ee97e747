#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace qdarwin {

enum class Provenance { analytic, quadrature, enumeration, montecarlo };

std::string_view to_string(Provenance p);

struct PipPoint {
  int m = 0;
  double mean_bits = 0.0;
  std::optional<double> stderr_bits;  // absent for exact provenance
};

/// Average mutual information I(S : E_m) against captured size m = 0..N, in bits.
struct PipCurve {
  int n_env = 0;
  Provenance provenance = Provenance::analytic;
  std::vector<PipPoint> points;

  const PipPoint& at(int m) const { return points.at(static_cast<std::size_t>(m)); }
  double value(int m) const { return at(m).mean_bits; }
};

}  // namespace qdarwin
