#include "doctest.h"

#include <bit>
#include <cmath>
#include <map>
#include <set>

#include "qdarwin/rng.hpp"
#include "qdarwin/special_functions.hpp"
#include "qdarwin/subsets.hpp"

using namespace qdarwin;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using B = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  CounterRng a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  bool differs_stream = false, differs_seed = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs_stream |= x != c.next_u64();
    differs_seed |= x != d.next_u64();
  }
  CHECK(differs_stream);
  CHECK(differs_seed);
}

TEST_CASE("uniform and normal draws have the right moments") {
  CounterRng rng(1, 0);
  constexpr int n = 200'000;
  double sum = 0.0, sum_sq = 0.0, u_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    u_sum += u;
    const double z = rng.normal();
    sum += z;
    sum_sq += z * z;
  }
  CHECK(std::abs(u_sum / n - 0.5) < 5 * std::sqrt(1.0 / 12 / n));
  CHECK(std::abs(sum / n) < 5 / std::sqrt(double(n)));
  CHECK(std::abs(sum_sq / n - 1.0) < 5 * std::sqrt(2.0 / n));
}

TEST_CASE("below() stays in range and covers it evenly") {
  CounterRng rng(5, 0);
  std::map<std::uint64_t, int> counts;
  constexpr int n = 70'000;
  for (int i = 0; i < n; ++i) {
    const auto k = rng.below(7);
    REQUIRE(k < 7);
    ++counts[k];
  }
  CHECK(counts.size() == 7);
  for (auto [k, c] : counts) CHECK(std::abs(c - n / 7.0) < 5 * std::sqrt(n / 7.0));
  CHECK_THROWS(rng.below(0));
}

TEST_CASE("subset enumeration visits each m-subset once, in order") {
  for (int n = 0; n <= 16; ++n)
    for (int m = 0; m <= n; ++m) {
      std::uint64_t count = 0;
      EnvMask prev = 0;
      bool ordered = true;
      for_each_subset(n, m, [&](EnvMask s) {
        REQUIRE(std::popcount(s) == m);
        REQUIRE((s & ~full_env_mask(n)) == 0);
        if (count > 0) ordered &= s > prev;
        prev = s;
        ++count;
      });
      CHECK(ordered);
      CHECK(static_cast<double>(count) == binomial(n, m));
    }
  std::uint64_t count = 0;
  for_each_subset(64, 63, [&](EnvMask) { ++count; });
  CHECK(count == 64);
  for_each_subset(64, 64, [&](EnvMask s) { CHECK(s == ~EnvMask{0}); });
  CHECK_THROWS(for_each_subset(4, 5, [](EnvMask) {}));
}

TEST_CASE("random subsets are uniform over m-subsets") {
  CounterRng rng(9, 1);
  std::map<EnvMask, int> counts;
  constexpr int n = 100'000;
  for (int i = 0; i < n; ++i) {
    const EnvMask s = random_subset(5, 2, rng);
    REQUIRE(std::popcount(s) == 2);
    ++counts[s];
  }
  CHECK(counts.size() == 10);
  for (auto [s, c] : counts) CHECK(std::abs(c - n / 10.0) < 5 * std::sqrt(n / 10.0));
  CHECK(std::popcount(random_subset(64, 40, rng)) == 40);
}
