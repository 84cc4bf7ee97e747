#pragma once

#include <array>
#include <vector>

#include "qdarwin/qkernel.hpp"
#include "qdarwin/subsets.hpp"

namespace qdarwin {

/// Single-qubit pure state, amplitudes on |0> and |1>.
using QubitState = std::array<cplx, 2>;

/// The two conditional states of one environment qubit: |psi_i> goes with
/// system |0>, |psi'_i> with system |1>.
struct EnvironmentRecord {
  QubitState if_zero;
  QubitState if_one;

  /// Overlap gamma_i = <psi_i|psi'_i>.
  cplx overlap() const;
};

/// alpha |0>_S (x)_i |psi_i> + beta |1>_S (x)_i |psi'_i>.
struct BranchSpec {
  cplx alpha;
  cplx beta;
  std::vector<EnvironmentRecord> environments;

  int n_env() const { return static_cast<int>(environments.size()); }
  /// Throws std::invalid_argument when an amplitude pair is not normalized (1e-12).
  void validate() const;
};

/// Base purity P0 plus one additive decoherence factor per environment,
/// d_i = -ln|gamma_i|^2 (natural log; +inf allowed).
class DecoherenceProfile {
 public:
  DecoherenceProfile(double p0, std::vector<double> d);

  /// P0 = x^2 + (1-x)^2 for a pointer-basis population x.
  static double base_purity(double x);

  double p0() const { return p0_; }
  const std::vector<double>& d() const { return d_; }
  int n_env() const { return static_cast<int>(d_.size()); }

  /// d_S, the sum over every environment.
  double total() const;
  /// Sum of d_i over the environments in mask.
  double sum_over(EnvMask mask) const;

 private:
  double p0_;
  std::vector<double> d_;
};

/// Rank-2 state [[x, sqrt(x(1-x)) g], [sqrt(x(1-x)) g*, 1-x]].
struct VirtualQubit {
  double x = 1.0;
  cplx gamma = 1.0;

  Eigen::Matrix2cd matrix() const;
  Eigen::Vector2d eigenvalues() const;
  Entropy entropy() const;
};

enum class BranchPart { system, environments, system_and_environments };

PureState branch_to_state_vector(const BranchSpec& spec);

DecoherenceProfile profile_from_branch(const BranchSpec& spec);

/// Reduced state of S, of E_mask, or of S E_mask, in the basis induced by
/// the two branches. `mask` uses register numbering (environment i is qubit
/// i) and is ignored for BranchPart::system.
VirtualQubit reduced_density_matrix(const BranchSpec& spec, BranchPart part, QubitMask mask);

/// -ln|gamma|^2, +inf for gamma == 0.
double decoherence_factor(cplx gamma);

/// k * d with 0 * inf = 0: the summed factor of k environments of strength d.
double repeated_d(int k, double d);

/// H(P0, d) = ln2 - [(1+z) ln(1+z) + (1-z) ln(1-z)] / 2,
/// z = sqrt(1 - 2 (1-P0)(1 - e^-d)).
Entropy entropy_h(double p0, double d);

/// H(P0, d_total) + H(P0, d_captured) - H(P0, d_rest): mutual information
/// between S and a sub-environment from the three summed factors.
Entropy mutual_information_from_factors(double p0, double d_total, double d_captured, double d_rest);

/// I(S : E_mask) = H(P0, d_S) + H(P0, d_mask) - H(P0, d_complement). The
/// complement is summed directly, so infinite factors are safe.
Entropy subset_mutual_information(const DecoherenceProfile& profile, EnvMask mask);

}  // namespace qdarwin
