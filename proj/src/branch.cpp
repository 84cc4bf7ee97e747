#include "qdarwin/branch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qdarwin {
namespace {

constexpr double kNormTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool normalized(const QubitState& q) { return std::abs(std::norm(q[0]) + std::norm(q[1]) - 1.0) <= kNormTol; }

void check_env_mask(const BranchSpec& spec, QubitMask mask) {
  if (mask.contains(0)) throw std::invalid_argument("system not an environment");
  if (!mask.fits(spec.n_env() + 1)) throw std::invalid_argument("mask out of range");
}

}  // namespace

cplx EnvironmentRecord::overlap() const {
  return std::conj(if_zero[0]) * if_one[0] + std::conj(if_zero[1]) * if_one[1];
}

void BranchSpec::validate() const {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > kNormTol)
    throw std::invalid_argument("|alpha|^2 + |beta|^2 != 1");
  for (std::size_t i = 0; i < environments.size(); ++i)
    if (!normalized(environments[i].if_zero) || !normalized(environments[i].if_one))
      throw std::invalid_argument("environment state " + std::to_string(i + 1) + " is not normalized");
}

DecoherenceProfile::DecoherenceProfile(double p0, std::vector<double> d) : p0_(p0), d_(std::move(d)) {
  if (!(p0 >= 0.5 - 1e-12 && p0 <= 1.0 + 1e-12)) throw std::invalid_argument("base purity outside [1/2, 1]");
  p0_ = std::clamp(p0, 0.5, 1.0);
  if (d_.size() > static_cast<std::size_t>(kMaxEnvironments))
    throw std::invalid_argument("profiles hold at most 64 environments");
  for (double di : d_)
    if (!(di >= 0.0)) throw std::invalid_argument("decoherence factors must be >= 0");
}

double DecoherenceProfile::base_purity(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("population outside [0, 1]");
  return x * x + (1.0 - x) * (1.0 - x);
}

double DecoherenceProfile::total() const { return sum_over(full_env_mask(n_env())); }

double DecoherenceProfile::sum_over(EnvMask mask) const {
  if ((mask & ~full_env_mask(n_env())) != 0) throw std::invalid_argument("mask out of range");
  double sum = 0.0;
  for (int i = 0; i < n_env(); ++i)
    if ((mask >> i) & 1U) sum += d_[static_cast<std::size_t>(i)];
  return sum;
}

Eigen::Matrix2cd VirtualQubit::matrix() const {
  const double c = std::sqrt(x * (1.0 - x));
  Eigen::Matrix2cd m;
  m << x, c * gamma, c * std::conj(gamma), 1.0 - x;
  return m;
}

Eigen::Vector2d VirtualQubit::eigenvalues() const {
  const double r = std::sqrt((2.0 * x - 1.0) * (2.0 * x - 1.0) + 4.0 * x * (1.0 - x) * std::norm(gamma));
  return {0.5 * (1.0 - r), 0.5 * (1.0 + r)};
}

Entropy VirtualQubit::entropy() const { return spectrum_entropy(eigenvalues()); }

PureState branch_to_state_vector(const BranchSpec& spec) {
  spec.validate();
  const int n = spec.n_env() + 1;
  if (n > max_register_qubits())
    throw std::invalid_argument("register of " + std::to_string(n) + " qubits exceeds soft limit of " +
                                std::to_string(max_register_qubits()));
  CVector zero = CVector::Ones(1);
  CVector one = CVector::Ones(1);
  for (const auto& env : spec.environments) {
    CVector z(zero.size() * 2), o(one.size() * 2);
    for (Eigen::Index i = 0; i < zero.size(); ++i) {
      z[2 * i] = zero[i] * env.if_zero[0];
      z[2 * i + 1] = zero[i] * env.if_zero[1];
      o[2 * i] = one[i] * env.if_one[0];
      o[2 * i + 1] = one[i] * env.if_one[1];
    }
    zero = std::move(z);
    one = std::move(o);
  }
  CVector psi(zero.size() * 2);
  psi << spec.alpha * zero, spec.beta * one;
  return PureState::normalized(n, std::move(psi));
}

DecoherenceProfile profile_from_branch(const BranchSpec& spec) {
  spec.validate();
  std::vector<double> d;
  d.reserve(spec.environments.size());
  for (const auto& env : spec.environments) d.push_back(decoherence_factor(env.overlap()));
  return DecoherenceProfile(DecoherenceProfile::base_purity(std::norm(spec.alpha)), std::move(d));
}

VirtualQubit reduced_density_matrix(const BranchSpec& spec, BranchPart part, QubitMask mask) {
  spec.validate();
  if (part != BranchPart::system) check_env_mask(spec, mask);
  cplx product = 1.0;
  for (int i = 1; i <= spec.n_env(); ++i) {
    const bool in_mask = mask.contains(i);
    const bool take = part == BranchPart::system || (part == BranchPart::environments ? in_mask : !in_mask);
    if (take) product *= spec.environments[static_cast<std::size_t>(i - 1)].overlap();
  }
  // Off-diagonal alpha* beta prod(gamma) = sqrt(x(1-x)) * phase * prod(gamma).
  const cplx ab = std::conj(spec.alpha) * spec.beta;
  const cplx phase = std::abs(ab) > 0.0 ? ab / std::abs(ab) : cplx(1.0);
  return VirtualQubit{std::norm(spec.alpha), phase * product};
}

double decoherence_factor(cplx gamma) {
  const double g2 = std::norm(gamma);
  if (g2 == 0.0) return kInf;
  return std::max(0.0, -std::log(g2));
}

double repeated_d(int k, double d) { return k == 0 ? 0.0 : k * d; }

Entropy entropy_h(double p0, double d) {
  if (!(p0 >= 0.5 - 1e-12 && p0 <= 1.0 + 1e-12)) throw std::invalid_argument("base purity outside [1/2, 1]");
  if (!(d >= 0.0)) throw std::invalid_argument("decoherence factor must be >= 0");
  p0 = std::clamp(p0, 0.5, 1.0);
  const double lost = -std::expm1(-d);  // 1 - e^-d, exactly 1 at +inf
  const double z = std::sqrt(std::max(0.0, 1.0 - 2.0 * (1.0 - p0) * lost));
  const double plus = (1.0 + z) * std::log1p(z);
  const double minus = z < 1.0 ? (1.0 - z) * std::log1p(-z) : 0.0;
  return Entropy::nats(std::max(0.0, std::numbers::ln2 - 0.5 * (plus + minus)));
}

Entropy mutual_information_from_factors(double p0, double d_total, double d_captured, double d_rest) {
  return entropy_h(p0, d_total) + entropy_h(p0, d_captured) - entropy_h(p0, d_rest);
}

Entropy subset_mutual_information(const DecoherenceProfile& profile, EnvMask mask) {
  const EnvMask rest = ~mask & full_env_mask(profile.n_env());
  return mutual_information_from_factors(profile.p0(), profile.total(), profile.sum_over(mask),
                                         profile.sum_over(rest));
}

}  // namespace qdarwin
