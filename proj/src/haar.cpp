#include "qdarwin/haar.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdarwin/parallel.hpp"
#include "qdarwin/special_functions.hpp"
#include "qdarwin/subsets.hpp"

namespace qdarwin {
namespace {

// Subset sampling draws from streams disjoint from the state streams.
constexpr std::uint64_t kSubsetStreamTag = std::uint64_t{1} << 63;

// Memoized marginal entropies of one pure state, keyed by the smaller side
// of each cut.
class MarginalCache {
 public:
  explicit MarginalCache(const PureState& psi)
      : psi_(psi), full_(QubitMask::all(psi.n_qubits()).bits()),
        values_(std::size_t{1} << psi.n_qubits(), std::numeric_limits<double>::quiet_NaN()) {}

  double nats(std::uint64_t mask) {
    const std::uint64_t key = std::min(mask, ~mask & full_);
    double& slot = values_[key];
    if (std::isnan(slot)) slot = marginal_entropy(psi_, QubitMask(key)).in_nats();
    return slot;
  }

 private:
  const PureState& psi_;
  std::uint64_t full_;
  std::vector<double> values_;
};

}  // namespace

PureState haar_random_pure_state(int n_qubits, RngSeed seed, std::uint64_t stream) {
  if (n_qubits < 1 || n_qubits > max_register_qubits())
    throw std::invalid_argument("register size outside [1, soft limit]");
  CounterRng rng(seed, stream);
  CVector v(Eigen::Index{1} << n_qubits);
  for (auto& a : v) {
    const double re = rng.normal();
    const double im = rng.normal();
    a = cplx(re, im);
  }
  return PureState::normalized(n_qubits, std::move(v));
}

Entropy page_mean_entropy(std::uint64_t m_dim, std::uint64_t n_dim) {
  if (m_dim < 1) throw std::invalid_argument("subsystem dimension must be positive");
  if (m_dim > n_dim) throw std::invalid_argument("subsystem larger than complement");
  const double sum = harmonic_difference(n_dim, m_dim * n_dim);
  return Entropy::nats(sum - static_cast<double>(m_dim - 1) / (2.0 * static_cast<double>(n_dim)));
}

Entropy mean_qubit_entropy(int k, int n_total) {
  if (n_total < 0 || k < 0) throw std::invalid_argument("qubit counts must be nonnegative");
  if (k > n_total) throw std::invalid_argument("subsystem larger than the universe");
  if (n_total > 62) throw std::invalid_argument("universe too large");
  if (2 * k > n_total) k = n_total - k;
  if (k == 0) return Entropy::nats(0.0);
  const std::uint64_t big = std::uint64_t{1} << n_total;
  const std::uint64_t rest = std::uint64_t{1} << (n_total - k);
  const double correction = std::ldexp(std::ldexp(1.0, k) - 1.0, k - n_total - 1);
  return Entropy::nats(harmonic_difference(rest, big) - correction);
}

PipCurve haar_average_pip(int n_env) {
  if (n_env < 1) throw std::invalid_argument("need at least one environment");
  const int universe = n_env + 1;
  const Entropy h_system = mean_qubit_entropy(1, universe);
  PipCurve curve{n_env, Provenance::analytic, {}};
  for (int m = 0; m <= n_env; ++m) {
    const Entropy mi = h_system + mean_qubit_entropy(m, universe) - mean_qubit_entropy(m + 1, universe);
    curve.points.push_back({m, mi.in_bits(), std::nullopt});
  }
  return curve;
}

PipCurve sampled_average_pip(int n_env, const HaarSampling& opts) {
  if (n_env < 1) throw std::invalid_argument("need at least one environment");
  if (opts.samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (opts.subset_budget < 1) throw std::invalid_argument("subset budget must be >= 1");
  const int universe = n_env + 1;
  if (universe > max_register_qubits())
    throw std::invalid_argument("register of " + std::to_string(universe) + " qubits exceeds soft limit of " +
                                std::to_string(max_register_qubits()));

  const auto samples = static_cast<std::size_t>(opts.samples);
  const auto width = static_cast<std::size_t>(n_env + 1);
  std::vector<double> per_sample(samples * width, 0.0);  // bits, row per sample

  parallel_for(samples, opts.threads, [&](std::size_t s) {
    const PureState psi = haar_random_pure_state(universe, opts.seed, s);
    MarginalCache cache(psi);
    CounterRng subset_rng(opts.seed, kSubsetStreamTag | s);
    const std::uint64_t system = QubitMask{0}.bits();
    const double h_system = cache.nats(system);

    auto mi_bits = [&](EnvMask env) {
      const std::uint64_t reg = env << 1;
      return (h_system + cache.nats(reg) - cache.nats(reg | system)) / std::numbers::ln2;
    };

    double* row = &per_sample[s * width];
    row[0] = 0.0;
    for (int m = 1; m <= n_env; ++m) {
      double sum = 0.0;
      std::uint64_t count = 0;
      if (binomial(n_env, m) <= static_cast<double>(opts.subset_budget)) {
        for_each_subset(n_env, m, [&](EnvMask env) {
          sum += mi_bits(env);
          ++count;
        });
      } else {
        for (; count < opts.subset_budget; ++count) sum += mi_bits(random_subset(n_env, m, subset_rng));
      }
      row[m] = sum / static_cast<double>(count);
    }
  });

  PipCurve curve{n_env, Provenance::montecarlo, {}};
  for (std::size_t m = 0; m < width; ++m) {
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
      const double v = per_sample[s * width + m];
      sum += v;
      sum_sq += v * v;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    std::optional<double> stderr_bits;
    if (samples > 1) {
      const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
      stderr_bits = std::sqrt(var / n);
    }
    curve.points.push_back({static_cast<int>(m), mean, stderr_bits});
  }
  return curve;
}

}  // namespace qdarwin
