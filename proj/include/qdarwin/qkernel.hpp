#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>

#include <Eigen/Dense>

namespace qdarwin {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Register convention: qubit 0 is the system S, qubits 1..N are the
// environments E_1..E_N. Basis index bit (n - 1 - q) holds qubit q, so the
// amplitude layout matches S (x) E_1 (x) ... (x) E_N.

inline constexpr int kDefaultMaxQubits = 14;

/// Soft limit on dense register size. Shared process-wide.
int max_register_qubits() noexcept;
void set_max_register_qubits(int n);

class QubitMask {
 public:
  constexpr QubitMask() = default;
  constexpr explicit QubitMask(std::uint64_t bits) : bits_(bits) {}
  constexpr QubitMask(std::initializer_list<int> qubits) {
    for (int q : qubits) bits_ |= std::uint64_t{1} << q;
  }

  static constexpr QubitMask all(int n_qubits) {
    return QubitMask(n_qubits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_qubits) - 1);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int count() const { return std::popcount(bits_); }
  constexpr bool contains(int q) const { return (bits_ >> q) & 1U; }
  constexpr bool overlaps(QubitMask o) const { return (bits_ & o.bits_) != 0; }
  constexpr bool fits(int n_qubits) const { return (bits_ & ~all(n_qubits).bits_) == 0; }
  constexpr QubitMask complement(int n_qubits) const { return QubitMask(~bits_ & all(n_qubits).bits_); }

  constexpr QubitMask operator|(QubitMask o) const { return QubitMask(bits_ | o.bits_); }
  constexpr QubitMask operator&(QubitMask o) const { return QubitMask(bits_ & o.bits_); }
  constexpr bool operator==(const QubitMask&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

/// An entropy value. Stored in nats; bits() converts for reporting.
class Entropy {
 public:
  constexpr Entropy() = default;
  static constexpr Entropy nats(double v) { return Entropy(v); }
  static constexpr Entropy bits(double v) { return Entropy(v * std::numbers::ln2); }

  constexpr double in_nats() const { return nats_; }
  constexpr double in_bits() const { return nats_ / std::numbers::ln2; }

  constexpr Entropy operator+(Entropy o) const { return Entropy(nats_ + o.nats_); }
  constexpr Entropy operator-(Entropy o) const { return Entropy(nats_ - o.nats_); }
  constexpr auto operator<=>(const Entropy&) const = default;

 private:
  constexpr explicit Entropy(double v) : nats_(v) {}
  double nats_ = 0.0;
};

class PureState {
 public:
  /// Takes amplitudes that are already normalized; throws otherwise.
  PureState(int n_qubits, CVector amplitudes);

  /// Normalizes the given vector. Throws on a zero vector.
  static PureState normalized(int n_qubits, CVector amplitudes);

  static PureState product(const PureState& a, const PureState& b);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const CVector& amplitudes() const { return amplitudes_; }

 private:
  int n_qubits_;
  CVector amplitudes_;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity and unit trace (1e-12). Positivity is checked
  /// lazily by von_neumann_entropy.
  DensityMatrix(int n_qubits, CMatrix entries);

  static DensityMatrix projector(const PureState& psi);

  int n_qubits() const { return n_qubits_; }
  const CMatrix& entries() const { return entries_; }

 private:
  int n_qubits_;
  CMatrix entries_;
};

DensityMatrix partial_trace(const PureState& state, QubitMask keep);
DensityMatrix partial_trace(const DensityMatrix& rho, QubitMask keep);

Entropy von_neumann_entropy(const DensityMatrix& rho);

/// Entropy of a Hermitian PSD spectrum, -sum l ln l with the clipping rules
/// of von_neumann_entropy.
Entropy spectrum_entropy(const Eigen::VectorXd& eigenvalues);

/// H(mask) for a globally pure state, traced over whichever side of the cut
/// is smaller. The whole register and the empty set both give 0.
Entropy marginal_entropy(const PureState& state, QubitMask mask);

Entropy mutual_information(const PureState& state, QubitMask a, QubitMask b);

bool all_bipartitions_maximally_entangled(const PureState& state);

// Named states used throughout the tests and examples.
PureState basis_state(int n_qubits, std::uint64_t index);
PureState ghz_state(int n_qubits);

}  // namespace qdarwin
