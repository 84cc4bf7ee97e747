#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "qdarwin/branch.hpp"
#include "test_support.hpp"

using namespace qdarwin;
using qdarwin::testing::random_branch;

namespace {

constexpr double ln2 = std::numbers::ln2;
constexpr double inf = std::numeric_limits<double>::infinity();
const double inv_sqrt2 = std::numbers::sqrt2 / 2;

BranchSpec ghz_branch(int n_env) {
  BranchSpec spec{inv_sqrt2, inv_sqrt2, {}};
  for (int i = 0; i < n_env; ++i) spec.environments.push_back({{1.0, 0.0}, {0.0, 1.0}});
  return spec;
}

Eigen::VectorXd spectrum(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho.entries(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

// Two largest eigenvalues of rho against the virtual-qubit pair; the rest must vanish.
void check_same_spectrum(const DensityMatrix& rho, const VirtualQubit& vq) {
  const Eigen::VectorXd ev = spectrum(rho);
  const Eigen::Index n = ev.size();
  const Eigen::Vector2d expected = vq.eigenvalues();
  CHECK(std::abs(ev[n - 1] - expected[1]) < 1e-10);
  if (n > 1) CHECK(std::abs(ev[n - 2] - expected[0]) < 1e-10);
  for (Eigen::Index i = 0; i + 2 < n; ++i) CHECK(std::abs(ev[i]) < 1e-10);
}

}  // namespace

TEST_CASE("branch state with orthogonal records is a GHZ state") {
  for (int n = 1; n <= 6; ++n) {
    const PureState psi = branch_to_state_vector(ghz_branch(n));
    CHECK((psi.amplitudes() - ghz_state(n + 1).amplitudes()).norm() < 1e-15);
  }
}

TEST_CASE("identical records leave system and environment uncorrelated") {
  std::mt19937_64 gen(3);
  BranchSpec spec = random_branch(3, gen);
  for (auto& env : spec.environments) env.if_one = env.if_zero;
  const PureState psi = branch_to_state_vector(spec);
  CHECK(std::abs(mutual_information(psi, QubitMask{0}, QubitMask{1, 2, 3}).in_nats()) < 1e-12);
  for (double d : profile_from_branch(spec).d()) CHECK(d == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("random branch states are normalized") {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 10; ++trial)
    CHECK(std::abs(branch_to_state_vector(random_branch(6, gen)).amplitudes().squaredNorm() - 1.0) < 1e-12);
}

TEST_CASE("branch spec validation and soft limit") {
  BranchSpec bad = ghz_branch(2);
  bad.alpha = 1.0;
  CHECK_THROWS(branch_to_state_vector(bad));
  bad = ghz_branch(2);
  bad.environments[1].if_one = {1.0, 1.0};
  CHECK_THROWS(profile_from_branch(bad));
  CHECK_THROWS(branch_to_state_vector(ghz_branch(14)));
}

TEST_CASE("decoherence factors use the natural log") {
  const double g = std::exp(-0.5);  // |gamma|^2 = e^-1
  BranchSpec spec{inv_sqrt2, inv_sqrt2, {}};
  spec.environments.push_back({{1.0, 0.0}, {g, std::sqrt(1.0 - g * g)}});
  spec.environments.push_back({{1.0, 0.0}, {0.0, 1.0}});
  spec.environments.push_back({{0.6, 0.8}, {0.6, 0.8}});
  const DecoherenceProfile profile = profile_from_branch(spec);
  CHECK(profile.d()[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(profile.d()[1] == inf);
  CHECK(profile.d()[2] == doctest::Approx(0.0));
  CHECK(profile.p0() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(DecoherenceProfile::base_purity(0.25) == doctest::Approx(0.625));
}

TEST_CASE("d-factors are additive over disjoint sets of environments") {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> eighths(0, 40);
  std::vector<double> d;
  for (int i = 0; i < 12; ++i) d.push_back(eighths(gen) / 8.0);  // dyadic: sums are exact
  const DecoherenceProfile profile(0.5, d);
  std::uniform_int_distribution<EnvMask> pick(0, full_env_mask(12));
  for (int trial = 0; trial < 50; ++trial) {
    const EnvMask a = pick(gen);
    const EnvMask b = pick(gen) & ~a;
    CHECK(profile.sum_over(a | b) == profile.sum_over(a) + profile.sum_over(b));
  }

  // At the state level, -ln|prod gamma|^2 is the sum of the individual factors.
  const BranchSpec spec = random_branch(5, gen);
  cplx product = 1.0;
  double sum = 0.0;
  for (const auto& env : spec.environments) {
    product *= env.overlap();
    sum += decoherence_factor(env.overlap());
  }
  CHECK(decoherence_factor(product) == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("reduced density matrices of branch states") {
  std::mt19937_64 gen(6);
  const BranchSpec spec = random_branch(4, gen);
  const QubitMask all_env{1, 2, 3, 4};

  const VirtualQubit whole = reduced_density_matrix(spec, BranchPart::system_and_environments, all_env);
  CHECK(whole.entropy().in_nats() == doctest::Approx(0.0).epsilon(1e-12));

  const VirtualQubit sys = reduced_density_matrix(spec, BranchPart::system, {});
  cplx prod = 1.0;
  for (const auto& env : spec.environments) prod *= env.overlap();
  CHECK(std::abs(sys.matrix()(0, 1) - std::conj(spec.alpha) * spec.beta * prod) < 1e-14);
  CHECK(std::abs(sys.matrix()(1, 0) - spec.alpha * std::conj(spec.beta) * std::conj(prod)) < 1e-14);
  CHECK(std::abs(sys.matrix()(0, 0) - std::norm(spec.alpha)) < 1e-15);

  CHECK_THROWS_WITH(reduced_density_matrix(spec, BranchPart::environments, QubitMask{0, 1}),
                    "system not an environment");
  CHECK_THROWS_WITH(reduced_density_matrix(spec, BranchPart::environments, QubitMask{5}), "mask out of range");
}

TEST_CASE("virtual-qubit spectra match the state-vector partial traces") {
  std::mt19937_64 gen(8);
  for (int n_env = 1; n_env <= 6; ++n_env) {
    const BranchSpec spec = random_branch(n_env, gen);
    const PureState psi = branch_to_state_vector(spec);
    check_same_spectrum(partial_trace(psi, QubitMask{0}), reduced_density_matrix(spec, BranchPart::system, {}));
    for (std::uint64_t env = 1; env <= full_env_mask(n_env); ++env) {
      const QubitMask mask(env << 1);
      check_same_spectrum(partial_trace(psi, mask), reduced_density_matrix(spec, BranchPart::environments, mask));
      check_same_spectrum(partial_trace(psi, mask | QubitMask{0}),
                          reduced_density_matrix(spec, BranchPart::system_and_environments, mask));
    }
  }
}

TEST_CASE("two-parameter entropy H(P0, d)") {
  CHECK(entropy_h(0.5, 0.0).in_nats() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(entropy_h(0.5, inf).in_nats() == doctest::Approx(ln2).epsilon(1e-15));
  // Eigensolve of [[1/2, g/2], [g/2, 1/2]] with g = e^-1/2 (tests/oracles/compute_oracles.py).
  CHECK(entropy_h(0.5, 1.0).in_nats() == doctest::Approx(0.49584225802144306).epsilon(1e-14));
  CHECK(entropy_h(1.0, 3.0).in_nats() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS(entropy_h(0.4, 1.0));
  CHECK_THROWS(entropy_h(1.1, 1.0));
  CHECK_THROWS(entropy_h(0.5, -1.0));

  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double x = u(gen);
    const cplx gamma = std::polar(u(gen), 2 * std::numbers::pi * u(gen));
    const VirtualQubit vq{x, gamma};
    const double h = entropy_h(DecoherenceProfile::base_purity(x), decoherence_factor(gamma)).in_nats();
    CHECK(h == doctest::Approx(vq.entropy().in_nats()).epsilon(1e-10));
  }
}

TEST_CASE("H(P0, d) is monotone in both arguments") {
  for (double p0 : {0.5, 0.6, 0.8, 0.95}) {
    double prev = 0.0;
    for (double d = 0.0; d <= 20.0; d += 0.05) {
      const double h = entropy_h(p0, d).in_nats();
      CHECK(h >= prev - 1e-15);
      prev = h;
    }
  }
  for (double d : {0.1, 1.0, 5.0, inf}) {
    double prev = inf;
    for (double p0 = 0.5; p0 <= 1.0; p0 += 0.01) {
      const double h = entropy_h(p0, d).in_nats();
      CHECK(h <= prev + 1e-15);
      prev = h;
    }
  }
}

TEST_CASE("subset mutual information from the profile") {
  const DecoherenceProfile profile(0.5, {0.3, 1.2, 0.0, 2.5, 0.7});
  const double h_total = entropy_h(0.5, profile.total()).in_nats();
  CHECK(subset_mutual_information(profile, 0).in_nats() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(subset_mutual_information(profile, full_env_mask(5)).in_nats() == doctest::Approx(2 * h_total).epsilon(1e-15));

  for (EnvMask mask = 0; mask <= full_env_mask(5); ++mask) {
    const EnvMask rest = ~mask & full_env_mask(5);
    const double sum = subset_mutual_information(profile, mask).in_nats() +
                       subset_mutual_information(profile, rest).in_nats();
    CHECK(std::abs(sum - 2 * h_total) < 1e-15);
    for (int i = 0; i < 5; ++i)
      CHECK(subset_mutual_information(profile, mask | (EnvMask{1} << i)).in_nats() >=
            subset_mutual_information(profile, mask).in_nats() - 1e-15);
  }
}

TEST_CASE("GHZ profile stores exactly H(S) in every proper sub-environment") {
  const DecoherenceProfile ghz(0.5, std::vector<double>(6, inf));
  for (EnvMask mask = 1; mask < full_env_mask(6); ++mask)
    CHECK(subset_mutual_information(ghz, mask).in_nats() == doctest::Approx(ln2).epsilon(1e-15));
  CHECK(subset_mutual_information(ghz, full_env_mask(6)).in_nats() == doctest::Approx(2 * ln2).epsilon(1e-15));
}

TEST_CASE("profile mutual information agrees with the state-vector oracle") {
  std::mt19937_64 gen(10);
  for (int trial = 0; trial < 20; ++trial) {
    const int n_env = 1 + trial % 6;
    const BranchSpec spec = random_branch(n_env, gen);
    const PureState psi = branch_to_state_vector(spec);
    const DecoherenceProfile profile = profile_from_branch(spec);
    for (EnvMask env = 1; env <= full_env_mask(n_env); ++env) {
      const double oracle = mutual_information(psi, QubitMask{0}, QubitMask(env << 1)).in_nats();
      CHECK(std::abs(subset_mutual_information(profile, env).in_nats() - oracle) < 1e-9);
    }
  }
}

TEST_CASE("profile validation") {
  CHECK_THROWS(DecoherenceProfile(0.3, {1.0}));
  CHECK_THROWS(DecoherenceProfile(0.5, {1.0, -0.1}));
  CHECK_THROWS(DecoherenceProfile(0.5, {std::nan("")}));
  CHECK_THROWS(DecoherenceProfile(0.5, std::vector<double>(65, 1.0)));
  CHECK(repeated_d(0, inf) == 0.0);
  CHECK(repeated_d(3, inf) == inf);
}
