#include "qdarwin/pip_curve.hpp"

namespace qdarwin {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::analytic: return "analytic";
    case Provenance::quadrature: return "quadrature";
    case Provenance::enumeration: return "enumeration";
    case Provenance::montecarlo: return "montecarlo";
  }
  return "unknown";
}

}  // namespace qdarwin
