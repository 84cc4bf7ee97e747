#include "qdarwin/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "qdarwin/parallel.hpp"
#include "qdarwin/quadrature.hpp"
#include "qdarwin/special_functions.hpp"
#include "qdarwin/subsets.hpp"

namespace qdarwin {
namespace {

constexpr double kQuadratureTol = 1e-8;

void check_factor(double d) {
  if (!(d >= 0.0)) throw std::invalid_argument("decoherence factor must be >= 0");
}

Entropy unimodal_point(int n_env, double d0, double p0, int m) {
  return mutual_information_from_factors(p0, repeated_d(n_env, d0), repeated_d(m, d0), repeated_d(n_env - m, d0));
}

Entropy bimodal_point(const BimodalD& b, double p0, int m) {
  const double d_total = repeated_d(b.n_useful, b.d0);
  const int lo = std::max(0, m + b.n_useful - b.n_total);
  const int hi = std::min(m, b.n_useful);
  double sum = 0.0;
  for (int k = lo; k <= hi; ++k) {
    const double w = hypergeometric_weight(b.n_total, b.n_useful, m, k);
    sum += w * mutual_information_from_factors(p0, d_total, repeated_d(k, b.d0), repeated_d(b.n_useful - k, b.d0))
                   .in_nats();
  }
  return Entropy::nats(sum);
}

void check_bimodal(const BimodalD& b) {
  check_factor(b.d0);
  if (b.n_total < 1) throw std::invalid_argument("need at least one environment");
  if (b.n_useful < 0 || b.n_useful > b.n_total) throw std::invalid_argument("n_useful outside [0, n_total]");
}

struct SubsetAverage {
  double mean_nats = 0.0;
  std::optional<double> stderr_nats;
  bool sampled = false;
};

SubsetAverage enumerate_average(const DecoherenceProfile& profile, int m) {
  double sum = 0.0;
  std::uint64_t count = 0;
  for_each_subset(profile.n_env(), m, [&](EnvMask mask) {
    sum += subset_mutual_information(profile, mask).in_nats();
    ++count;
  });
  return {sum / static_cast<double>(count), std::nullopt, false};
}

SubsetAverage sample_average(const DecoherenceProfile& profile, int m, const MonteCarloAveraging& mc) {
  CounterRng rng(mc.seed, static_cast<std::uint64_t>(m));
  double sum = 0.0, sum_sq = 0.0;
  for (int s = 0; s < mc.samples; ++s) {
    const double v = subset_mutual_information(profile, random_subset(profile.n_env(), m, rng)).in_nats();
    sum += v;
    sum_sq += v * v;
  }
  const double n = mc.samples;
  const double mean = sum / n;
  std::optional<double> err;
  if (mc.samples > 1) err = std::sqrt(std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) / n);
  return {mean, err, true};
}

// Finite integration range for the Erlang average; beyond it H(P0, d) is
// H(P0, inf) to within e^-cutoff.
double erlang_cutoff(int m) { return 40.0 + m + 10.0 * std::sqrt(static_cast<double>(m)); }

}  // namespace

PipCurve unimodal_pip(int n_env, double d0, double p0) {
  if (n_env < 1) throw std::invalid_argument("need at least one environment");
  check_factor(d0);
  PipCurve curve{n_env, Provenance::analytic, {}};
  for (int m = 0; m <= n_env; ++m) curve.points.push_back({m, unimodal_point(n_env, d0, p0, m).in_bits(), {}});
  return curve;
}

double hypergeometric_weight(int n_total, int n_useful, int m, int m_u) {
  if (n_total < 0 || n_useful < 0 || n_useful > n_total || m < 0 || m > n_total)
    throw std::invalid_argument("hypergeometric parameters out of range");
  if (m_u < std::max(0, m + n_useful - n_total) || m_u > std::min(m, n_useful)) return 0.0;
  const auto N = static_cast<std::uint64_t>(n_total);
  const auto K = static_cast<std::uint64_t>(n_useful);
  const auto n = static_cast<std::uint64_t>(m);
  const auto k = static_cast<std::uint64_t>(m_u);
  if (n_total > 1020) {
    return std::exp(std::lgamma(K + 1.0) - std::lgamma(k + 1.0) - std::lgamma(K - k + 1.0) +
                    std::lgamma(N - K + 1.0) - std::lgamma(n - k + 1.0) - std::lgamma(N - K - n + k + 1.0) -
                    (std::lgamma(N + 1.0) - std::lgamma(n + 1.0) - std::lgamma(N - n + 1.0)));
  }
  return binomial(K, k) * binomial(N - K, n - k) / binomial(N, n);
}

PipCurve bimodal_average_pip(int n_total, int n_useful, double d0, double p0) {
  const BimodalD b{n_useful, d0, n_total};
  check_bimodal(b);
  PipCurve curve{n_total, Provenance::analytic, {}};
  for (int m = 0; m <= n_total; ++m) curve.points.push_back({m, bimodal_point(b, p0, m).in_bits(), {}});
  return curve;
}

PipCurve empirical_average_pip(const DecoherenceProfile& profile, const AveragingMode& mode) {
  const int n = profile.n_env();
  if (n < 1) throw std::invalid_argument("need at least one environment");
  const auto* mc = std::get_if<MonteCarloAveraging>(&mode);
  if (mc && mc->samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (!mc) {
    for (int m = 0; m <= n; ++m)
      if (binomial(n, m) > kEnumerationHardCap)
        throw std::runtime_error("enumeration too large: C(" + std::to_string(n) + "," + std::to_string(m) +
                                 ") subsets exceeds the cap of 1e6");
  }
  const unsigned threads = mc ? mc->threads : std::get<ExactAveraging>(mode).threads;

  std::vector<SubsetAverage> averages(static_cast<std::size_t>(n + 1));
  parallel_for(averages.size(), threads, [&](std::size_t i) {
    const int m = static_cast<int>(i);
    const bool enumerate = !mc || binomial(n, m) <= static_cast<double>(mc->subset_budget);
    averages[i] = enumerate ? enumerate_average(profile, m) : sample_average(profile, m, *mc);
  });

  const bool any_sampled = std::ranges::any_of(averages, &SubsetAverage::sampled);
  PipCurve curve{n, any_sampled ? Provenance::montecarlo : Provenance::enumeration, {}};
  for (int m = 0; m <= n; ++m) {
    const auto& a = averages[static_cast<std::size_t>(m)];
    std::optional<double> err;
    if (a.stderr_nats) err = *a.stderr_nats / std::numbers::ln2;
    curve.points.push_back({m, a.mean_nats / std::numbers::ln2, err});
  }
  return curve;
}

CltMoments clt_moments(const DecoherenceProfile& profile, int m) {
  const int n = profile.n_env();
  if (m < 1 || m > n) throw std::invalid_argument("m outside [1, N]");
  const auto& d = profile.d();
  for (double di : d)
    if (!std::isfinite(di)) throw std::domain_error("moments undefined");
  double mean = 0.0;
  for (double di : d) mean += di;
  mean /= n;
  double var = 0.0;
  for (double di : d) var += (di - mean) * (di - mean);
  var /= n;
  const double shrink = m == 1 ? 1.0 : 1.0 - static_cast<double>(m - 1) / static_cast<double>(n - 1);
  return {m * mean, std::sqrt(m * shrink) * std::sqrt(var)};
}

double erlang_pdf(int m, double d) {
  if (m < 1) throw std::invalid_argument("erlang_pdf needs m >= 1");
  if (!(d >= 0.0)) throw std::invalid_argument("erlang_pdf needs d >= 0");
  if (d == 0.0) return m == 1 ? 1.0 : 0.0;
  if (std::isinf(d)) return 0.0;
  return std::exp((m - 1) * std::log(d) - d - std::lgamma(static_cast<double>(m)));
}

Entropy poisson_mean_entropy(int m) {
  if (m < 0) throw std::invalid_argument("m must be >= 0");
  if (m == 0) return Entropy::nats(0.0);
  // 1 - (2/3)^k = (3^k - 2^k) / 3^k
  const auto unresolved = [](int k) { return -std::expm1(k * std::log(2.0 / 3.0)); };
  double zeta_sum = 0.0;
  for (int j = m; j >= 2; --j) zeta_sum += unresolved(m + 1 - j) * riemann_zeta(j);
  return Entropy::nats(unresolved(m) * (std::numbers::ln2 - 1.0) + 0.5 * m - 0.5 * zeta_sum);
}

Entropy erlang_mean_entropy(int m, double p0) {
  if (m < 0) throw std::invalid_argument("m must be >= 0");
  if (m == 0) return entropy_h(p0, 0.0);  // point mass at d = 0
  const double cutoff = erlang_cutoff(m);
  const auto integrand = [m, p0](double d) { return erlang_pdf(m, d) * entropy_h(p0, d).in_nats(); };
  // Break at the Erlang mode so the adaptive rule sees one bump per piece.
  const double mode = std::max(1.0, static_cast<double>(m - 1));
  double value = integrate(integrand, 0.0, 1.0, kQuadratureTol / 3).value;
  if (mode > 1.0) value += integrate(integrand, 1.0, mode, kQuadratureTol / 3).value;
  value += integrate(integrand, mode, cutoff, kQuadratureTol / 3).value;
  value += entropy_h(p0, std::numeric_limits<double>::infinity()).in_nats() *
           boost::math::gamma_q(static_cast<double>(m), cutoff);
  return Entropy::nats(value);
}

PipCurve poisson_average_pip(int n_env) {
  if (n_env < 1) throw std::invalid_argument("need at least one environment");
  std::vector<Entropy> hbar;
  for (int k = 0; k <= n_env; ++k) hbar.push_back(poisson_mean_entropy(k));
  PipCurve curve{n_env, Provenance::analytic, {}};
  for (int m = 0; m <= n_env; ++m) {
    const Entropy mi = hbar[static_cast<std::size_t>(n_env)] + hbar[static_cast<std::size_t>(m)] -
                       hbar[static_cast<std::size_t>(n_env - m)];
    curve.points.push_back({m, mi.in_bits(), {}});
  }
  return curve;
}

Entropy pip_integral(const DDistribution& dist, int n_env, int m, double p0) {
  if (n_env < 1) throw std::invalid_argument("need at least one environment");
  if (m < 0 || m > n_env) throw std::invalid_argument("m outside [0, N]");
  return std::visit(
      [&](const auto& f) -> Entropy {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, UnimodalD>) {
          check_factor(f.d0);
          return unimodal_point(n_env, f.d0, p0, m);
        } else if constexpr (std::is_same_v<T, BimodalD>) {
          check_bimodal(f);
          if (f.n_total != n_env) throw std::invalid_argument("n_env does not match the bimodal distribution");
          return bimodal_point(f, p0, m);
        } else if constexpr (std::is_same_v<T, EmpiricalD>) {
          if (static_cast<int>(f.d.size()) != n_env)
            throw std::invalid_argument("n_env does not match the empirical distribution");
          if (binomial(n_env, m) > kEnumerationHardCap) throw std::runtime_error("enumeration too large");
          return Entropy::nats(enumerate_average(DecoherenceProfile(p0, f.d), m).mean_nats);
        } else {
          return erlang_mean_entropy(n_env, p0) + erlang_mean_entropy(m, p0) - erlang_mean_entropy(n_env - m, p0);
        }
      },
      dist);
}

}  // namespace qdarwin
