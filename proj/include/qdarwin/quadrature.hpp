#pragma once

#include <functional>

namespace qdarwin {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

/// Adaptive Gauss-Kronrod (7/15) integral of f over [a, b]. Throws
/// std::runtime_error naming the achieved error when abs_tol is not met.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol);

}  // namespace qdarwin
