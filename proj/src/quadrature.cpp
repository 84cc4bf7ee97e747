#include "qdarwin/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qdarwin {

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol) {
  if (!(b >= a)) throw std::invalid_argument("integration bounds out of order");
  if (a == b) return {};
  using rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  constexpr unsigned kMaxDepth = 20;
  double error = 0.0;
  double l1 = 0.0;
  // Boost's tolerance is relative to the L1 norm: estimate the norm with a
  // single panel, then ask for a relative tolerance that meets abs_tol.
  rule::integrate(f, a, b, 0, 0.0, &error, &l1);
  const double rel_tol = std::max(1e-15, 0.25 * abs_tol / std::max(l1, 1e-300));
  const double value = rule::integrate(f, a, b, kMaxDepth, rel_tol, &error, &l1);
  if (!std::isfinite(value) || error > abs_tol) {
    std::ostringstream msg;
    msg << "quadrature did not converge on [" << a << ", " << b << "]: achieved error " << error
        << " > tolerance " << abs_tol;
    throw std::runtime_error(msg.str());
  }
  return {value, error};
}

}  // namespace qdarwin
