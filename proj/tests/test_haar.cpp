#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qdarwin/haar.hpp"

using namespace qdarwin;

namespace {

struct MeanAndError {
  double mean;
  double stderr_;
};

template <typename F>
MeanAndError monte_carlo(int draws, F&& sample) {
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double v = sample(i);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / draws;
  return {mean, std::sqrt((sum_sq / draws - mean * mean) / (draws - 1))};
}

}  // namespace

TEST_CASE("Haar states are deterministic in (seed, stream) and normalized") {
  const PureState a = haar_random_pure_state(6, 123, 4);
  const PureState b = haar_random_pure_state(6, 123, 4);
  CHECK(a.amplitudes() == b.amplitudes());
  CHECK(a.amplitudes() != haar_random_pure_state(6, 123, 5).amplitudes());
  for (int s = 0; s < 20; ++s)
    CHECK(std::abs(haar_random_pure_state(5, 9, s).amplitudes().squaredNorm() - 1.0) < 1e-12);
  CHECK_THROWS(haar_random_pure_state(0, 1, 0));
  CHECK_THROWS(haar_random_pure_state(15, 1, 0));
}

TEST_CASE("single-qubit marginals of 10-qubit Haar states match the digamma form") {
  const auto mc = monte_carlo(1000, [](int s) {
    return marginal_entropy(haar_random_pure_state(10, 77, s), QubitMask{0}).in_nats();
  });
  CHECK(std::abs(mc.mean - mean_qubit_entropy(1, 10).in_nats()) < 3 * mc.stderr_);
}

TEST_CASE("Page mean entropy") {
  for (std::uint64_t n : {1, 2, 7, 64}) CHECK(page_mean_entropy(1, n).in_nats() == 0.0);
  CHECK(page_mean_entropy(2, 2).in_nats() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(page_mean_entropy(2, 4).in_nats() == doctest::Approx(0.50952380952380952).epsilon(1e-15));
  CHECK_THROWS_WITH(page_mean_entropy(4, 2), "subsystem larger than complement");

  // Monte Carlo: one qubit of a Haar 2-qubit state (m=n=2), one qubit of 3 (m=2, n=4).
  const auto two = monte_carlo(20000, [](int s) {
    return marginal_entropy(haar_random_pure_state(2, 5, s), QubitMask{0}).in_nats();
  });
  CHECK(std::abs(two.mean - 1.0 / 3.0) < 3 * two.stderr_);
  const auto three = monte_carlo(20000, [](int s) {
    return marginal_entropy(haar_random_pure_state(3, 6, s), QubitMask{1}).in_nats();
  });
  CHECK(std::abs(three.mean - 0.50952380952380952) < 3 * three.stderr_);
}

TEST_CASE("mean qubit entropy and its complement rule") {
  CHECK(mean_qubit_entropy(0, 5).in_nats() == 0.0);
  CHECK(mean_qubit_entropy(1, 2).in_nats() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(mean_qubit_entropy(2, 2).in_nats() == 0.0);
  CHECK_THROWS(mean_qubit_entropy(3, 2));
  for (int n = 1; n <= 14; ++n)
    for (int k = 0; k <= n; ++k) {
      CHECK(mean_qubit_entropy(k, n).in_nats() == mean_qubit_entropy(n - k, n).in_nats());
      CHECK(mean_qubit_entropy(k, n).in_nats() >= 0.0);
      if (2 * k <= n && k > 0) {
        const double page = page_mean_entropy(std::uint64_t{1} << k, std::uint64_t{1} << (n - k)).in_nats();
        CHECK(mean_qubit_entropy(k, n).in_nats() == doctest::Approx(page).epsilon(1e-13));
      }
    }
}

TEST_CASE("analytic Haar PIP") {
  for (int n = 1; n <= 13; ++n) {
    const PipCurve c = haar_average_pip(n);
    REQUIRE(c.points.size() == static_cast<std::size_t>(n + 1));
    CHECK(c.value(0) == 0.0);
    CHECK(c.value(n) == doctest::Approx(2.0 * mean_qubit_entropy(1, n + 1).in_bits()).epsilon(1e-14));
    for (int m = 0; m <= n; ++m) {
      CHECK(std::abs(c.value(m) + c.value(n - m) - c.value(n)) < 1e-10);
      if (m > 0) CHECK(c.value(m) >= c.value(m - 1) - 1e-12);
      CHECK_FALSE(c.at(m).stderr_bits.has_value());
    }
    if (n % 2 == 0) CHECK(c.value(n / 2) == doctest::Approx(c.value(n) / 2).epsilon(1e-12));
    if (n >= 5) CHECK(c.value(n) >= 1.9);
  }
  CHECK_THROWS(haar_average_pip(0));
}

TEST_CASE("sampled Haar PIP agrees with the analytic curve for N = 2") {
  const PipCurve analytic = haar_average_pip(2);
  const PipCurve sampled = sampled_average_pip(2, {.samples = 4000, .seed = 3});
  CHECK(sampled.provenance == Provenance::montecarlo);
  CHECK(sampled.value(0) == 0.0);
  for (int m = 1; m <= 2; ++m) {
    REQUIRE(sampled.at(m).stderr_bits.has_value());
    CHECK(*sampled.at(m).stderr_bits > 0.0);
    CHECK(std::abs(sampled.value(m) - analytic.value(m)) < 3 * *sampled.at(m).stderr_bits);
  }
}

TEST_CASE("sampled PIP is independent of thread count") {
  const PipCurve one = sampled_average_pip(4, {.samples = 24, .seed = 8, .threads = 1});
  const PipCurve many = sampled_average_pip(4, {.samples = 24, .seed = 8, .threads = 4});
  for (int m = 0; m <= 4; ++m) {
    CHECK(one.value(m) == many.value(m));
    CHECK(*one.at(m).stderr_bits == *many.at(m).stderr_bits);
  }
}

TEST_CASE("subset sampling kicks in above the budget") {
  // C(6,3) = 20 > budget 5 exercises the sampled branch; still reproducible.
  const HaarSampling opts{.samples = 10, .seed = 1, .subset_budget = 5};
  const PipCurve a = sampled_average_pip(6, opts);
  const PipCurve b = sampled_average_pip(6, opts);
  for (int m = 0; m <= 6; ++m) CHECK(a.value(m) == b.value(m));
  const PipCurve exact = sampled_average_pip(6, {.samples = 10, .seed = 1});
  // Only m = 6 (a single subset) is enumerated under both budgets.
  CHECK(a.value(6) == exact.value(6));
  CHECK(a.value(3) != exact.value(3));
}

TEST_CASE("sampled PIP argument checks") {
  CHECK_THROWS(sampled_average_pip(14, {.samples = 1}));
  CHECK_THROWS(sampled_average_pip(3, {.samples = 0}));
  const PipCurve single = sampled_average_pip(3, {.samples = 1});
  CHECK_FALSE(single.at(1).stderr_bits.has_value());
}
