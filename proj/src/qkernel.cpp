#include "qdarwin/qkernel.hpp"

#include <atomic>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdarwin {
namespace {

std::atomic<int> g_max_qubits{kDefaultMaxQubits};

constexpr double kNormTol = 1e-12;
constexpr double kHermitianTol = 1e-12;
constexpr double kNegativeEigenTol = 1e-10;

std::uint64_t dim_of(int n_qubits) { return std::uint64_t{1} << n_qubits; }

// Offsets into the full basis index for every configuration of the qubits in
// `mask`, enumerated with the lowest-numbered qubit as the most significant bit.
std::vector<std::uint64_t> scatter_offsets(int n_qubits, QubitMask mask) {
  std::vector<int> qubits;
  for (int q = 0; q < n_qubits; ++q)
    if (mask.contains(q)) qubits.push_back(q);
  const int k = static_cast<int>(qubits.size());
  std::vector<std::uint64_t> offsets(std::size_t{1} << k, 0);
  for (std::uint64_t a = 0; a < offsets.size(); ++a) {
    std::uint64_t off = 0;
    for (int j = 0; j < k; ++j)
      if ((a >> (k - 1 - j)) & 1U) off |= std::uint64_t{1} << (n_qubits - 1 - qubits[j]);
    offsets[a] = off;
  }
  return offsets;
}

void check_keep(int n_qubits, QubitMask keep) {
  if (keep.empty()) throw std::invalid_argument("empty subsystem");
  if (!keep.fits(n_qubits)) throw std::invalid_argument("mask out of range");
}

CMatrix hermitize(const CMatrix& m) { return (m + m.adjoint()) * 0.5; }

}  // namespace

int max_register_qubits() noexcept { return g_max_qubits.load(std::memory_order_relaxed); }

void set_max_register_qubits(int n) {
  if (n < 1 || n > 30) throw std::invalid_argument("register limit must be in [1, 30]");
  g_max_qubits.store(n, std::memory_order_relaxed);
}

PureState::PureState(int n_qubits, CVector amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  if (n_qubits < 1) throw std::invalid_argument("register needs at least one qubit");
  if (n_qubits > max_register_qubits())
    throw std::invalid_argument("register of " + std::to_string(n_qubits) +
                                " qubits exceeds soft limit of " + std::to_string(max_register_qubits()));
  if (static_cast<std::uint64_t>(amplitudes_.size()) != dim_of(n_qubits))
    throw std::invalid_argument("amplitude vector length is not 2^n_qubits");
  if (std::abs(amplitudes_.squaredNorm() - 1.0) > kNormTol)
    throw std::invalid_argument("state is not normalized");
}

PureState PureState::normalized(int n_qubits, CVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("cannot normalize a zero vector");
  amplitudes /= norm;
  return PureState(n_qubits, std::move(amplitudes));
}

PureState PureState::product(const PureState& a, const PureState& b) {
  CVector out(a.dim() * b.dim());
  for (Eigen::Index i = 0; i < a.dim(); ++i)
    out.segment(i * b.dim(), b.dim()) = a.amplitudes()[i] * b.amplitudes();
  return PureState::normalized(a.n_qubits() + b.n_qubits(), std::move(out));
}

DensityMatrix::DensityMatrix(int n_qubits, CMatrix entries)
    : n_qubits_(n_qubits), entries_(std::move(entries)) {
  if (n_qubits < 1 || n_qubits > 30) throw std::invalid_argument("bad qubit count");
  const auto d = static_cast<Eigen::Index>(dim_of(n_qubits));
  if (entries_.rows() != d || entries_.cols() != d)
    throw std::invalid_argument("density matrix dimension is not 2^n_qubits");
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
    throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(entries_.trace() - cplx(1.0, 0.0)) > kNormTol)
    throw std::invalid_argument("density matrix trace is not 1");
}

DensityMatrix DensityMatrix::projector(const PureState& psi) {
  return DensityMatrix(psi.n_qubits(), hermitize(psi.amplitudes() * psi.amplitudes().adjoint()));
}

DensityMatrix partial_trace(const PureState& state, QubitMask keep) {
  const int n = state.n_qubits();
  check_keep(n, keep);
  const auto keep_off = scatter_offsets(n, keep);
  const auto trace_off = scatter_offsets(n, keep.complement(n));
  const auto& psi = state.amplitudes();

  CMatrix m(keep_off.size(), trace_off.size());
  for (std::size_t b = 0; b < trace_off.size(); ++b)
    for (std::size_t a = 0; a < keep_off.size(); ++a)
      m(a, b) = psi[static_cast<Eigen::Index>(keep_off[a] | trace_off[b])];
  return DensityMatrix(keep.count(), hermitize(m * m.adjoint()));
}

DensityMatrix partial_trace(const DensityMatrix& rho, QubitMask keep) {
  const int n = rho.n_qubits();
  check_keep(n, keep);
  const auto keep_off = scatter_offsets(n, keep);
  const auto trace_off = scatter_offsets(n, keep.complement(n));
  const auto& full = rho.entries();

  const auto k = static_cast<Eigen::Index>(keep_off.size());
  CMatrix out = CMatrix::Zero(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index c = 0; c < k; ++c) {
      cplx sum = 0.0;
      for (std::uint64_t t : trace_off)
        sum += full(static_cast<Eigen::Index>(keep_off[a] | t), static_cast<Eigen::Index>(keep_off[c] | t));
      out(a, c) = sum;
    }
  return DensityMatrix(keep.count(), hermitize(out));
}

Entropy spectrum_entropy(const Eigen::VectorXd& eigenvalues) {
  double h = 0.0;
  for (double l : eigenvalues) {
    if (l < -kNegativeEigenTol) throw std::domain_error("not positive semidefinite");
    if (l > 0.0) h -= l * std::log(l);
  }
  return Entropy::nats(h);
}

Entropy von_neumann_entropy(const DensityMatrix& rho) {
  if (rho.entries().rows() == 1) return Entropy::nats(0.0);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho.entries(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");
  return spectrum_entropy(solver.eigenvalues());
}

Entropy marginal_entropy(const PureState& state, QubitMask mask) {
  const int n = state.n_qubits();
  if (!mask.fits(n)) throw std::invalid_argument("mask out of range");
  const QubitMask rest = mask.complement(n);
  if (mask.empty() || rest.empty()) return Entropy::nats(0.0);
  return von_neumann_entropy(partial_trace(state, mask.count() <= rest.count() ? mask : rest));
}

Entropy mutual_information(const PureState& state, QubitMask a, QubitMask b) {
  const int n = state.n_qubits();
  if (a.empty() || b.empty()) throw std::invalid_argument("empty subsystem");
  if (!a.fits(n) || !b.fits(n)) throw std::invalid_argument("mask out of range");
  if (a.overlaps(b)) throw std::invalid_argument("subsystems overlap");
  return marginal_entropy(state, a) + marginal_entropy(state, b) - marginal_entropy(state, a | b);
}

bool all_bipartitions_maximally_entangled(const PureState& state) {
  const int n = state.n_qubits();
  if (n < 2) throw std::invalid_argument("need at least two qubits for a bipartition");
  const std::uint64_t full = QubitMask::all(n).bits();
  for (std::uint64_t bits = 1; bits < full; ++bits) {
    const QubitMask a(bits);
    if (a.count() > n / 2) continue;
    const double h = von_neumann_entropy(partial_trace(state, a)).in_nats();
    if (std::abs(h - a.count() * std::numbers::ln2) > 1e-9) return false;
  }
  return true;
}

PureState basis_state(int n_qubits, std::uint64_t index) {
  if (n_qubits < 1 || n_qubits > 62 || index >= dim_of(n_qubits))
    throw std::invalid_argument("basis index out of range");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim_of(n_qubits)));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return PureState(n_qubits, std::move(v));
}

PureState ghz_state(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 62) throw std::invalid_argument("bad qubit count");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim_of(n_qubits)));
  v[0] = std::numbers::sqrt2 / 2;
  v[v.size() - 1] = std::numbers::sqrt2 / 2;
  return PureState(n_qubits, std::move(v));
}

}  // namespace qdarwin
