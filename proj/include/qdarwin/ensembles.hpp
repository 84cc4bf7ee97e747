#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "qdarwin/branch.hpp"
#include "qdarwin/pip_curve.hpp"
#include "qdarwin/rng.hpp"

namespace qdarwin {

// Distributions f_1(d) of per-environment decoherence factors.
struct UnimodalD {
  double d0 = 0.0;
};
struct BimodalD {
  int n_useful = 0;
  double d0 = 0.0;  // factor of each useful environment; the rest have d = 0
  int n_total = 0;
};
struct EmpiricalD {
  std::vector<double> d;
};
/// f_1(d) = e^-d, the factor of a Bloch-uniform environment pair.
struct ExponentialD {};

using DDistribution = std::variant<UnimodalD, BimodalD, EmpiricalD, ExponentialD>;

inline constexpr double kEnumerationHardCap = 1e6;

struct ExactAveraging {
  unsigned threads = 1;
};
struct MonteCarloAveraging {
  int samples = 10'000;
  RngSeed seed = 0;
  std::uint64_t subset_budget = 10'000;  // enumerate when C(N,m) is at most this
  unsigned threads = 1;
};
using AveragingMode = std::variant<ExactAveraging, MonteCarloAveraging>;

/// Every environment has factor d0, so I(m) = I(m d0) with no averaging.
PipCurve unimodal_pip(int n_env, double d0, double p0 = 0.5);

/// Probability that m environments drawn without replacement from n_total
/// contain exactly m_u of the n_useful useful ones. Zero off the support.
double hypergeometric_weight(int n_total, int n_useful, int m, int m_u);

/// Hypergeometric average of I(k d0) for n_useful environments of factor d0
/// among n_total.
PipCurve bimodal_average_pip(int n_total, int n_useful, double d0, double p0 = 0.5);

/// Average of subset_mutual_information over every m-subset (or uniform
/// samples of them). Exact mode refuses more than kEnumerationHardCap subsets
/// at any m.
PipCurve empirical_average_pip(const DecoherenceProfile& profile, const AveragingMode& mode);

struct CltMoments {
  double mean = 0.0;
  double width = 0.0;
};

/// Mean and standard deviation of the summed factor of m environments drawn
/// without replacement: m * mean(d) and sqrt(m (1 - (m-1)/(N-1))) * sd(d),
/// with population statistics.
CltMoments clt_moments(const DecoherenceProfile& profile, int m);

/// Erlang density d^(m-1) e^-d / (m-1)!, the law of a sum of m unit
/// exponentials. m >= 1.
double erlang_pdf(int m, double d);

/// Closed form of the Erlang-averaged entropy at P0 = 1/2 via zeta values.
Entropy poisson_mean_entropy(int m);

/// Same average by quadrature, for any P0: integral of erlang_pdf(m, d) H(P0, d).
Entropy erlang_mean_entropy(int m, double p0 = 0.5);

/// Ensemble PIP for Bloch-uniform product environments:
/// I(m) = Hbar_N + Hbar_m - Hbar_{N-m}.
PipCurve poisson_average_pip(int n_env);

/// I(m) as the integral of f_m(d) I(d). Discrete distributions sum exactly;
/// ExponentialD averages the three entropies by quadrature to 1e-8 each.
/// For BimodalD and EmpiricalD n_env must match the distribution.
Entropy pip_integral(const DDistribution& dist, int n_env, int m, double p0 = 0.5);

}  // namespace qdarwin
