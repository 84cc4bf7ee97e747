#pragma once

#include <cstdint>

#include "qdarwin/pip_curve.hpp"
#include "qdarwin/qkernel.hpp"
#include "qdarwin/rng.hpp"

namespace qdarwin {

/// Unitarily invariant random state: i.i.d. standard complex Gaussian
/// amplitudes, normalized. Deterministic in (seed, stream).
PureState haar_random_pure_state(int n_qubits, RngSeed seed, std::uint64_t stream);

/// Page's mean entanglement entropy of an m-dimensional subsystem of an
/// mn-dimensional pure state: sum_{k=n+1}^{mn} 1/k - (m-1)/(2n). Needs m <= n.
Entropy page_mean_entropy(std::uint64_t m_dim, std::uint64_t n_dim);

/// Mean entropy of k qubits out of an n_total-qubit Haar state, via the
/// digamma form. For k > n_total/2 the complement is used, since the global
/// state is pure.
Entropy mean_qubit_entropy(int k, int n_total);

/// Analytic Haar-average PIP for a 1-qubit system and n_env environment
/// qubits.
PipCurve haar_average_pip(int n_env);

struct HaarSampling {
  int samples = 500;
  RngSeed seed = 0;
  std::uint64_t subset_budget = 10'000;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Monte Carlo PIP over Haar states. Subsets of each size are enumerated when
/// there are at most subset_budget of them, otherwise subset_budget uniform
/// draws are averaged. Results do not depend on the thread count.
PipCurve sampled_average_pip(int n_env, const HaarSampling& opts);

}  // namespace qdarwin
