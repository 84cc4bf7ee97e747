#include "qdarwin/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qdarwin {
namespace {

// zeta(j) for j = 2..64, rounded from 40-digit values.
constexpr std::array<double, 63> kZetaTable = {
    1.64493406684822643647,  // 2
    1.2020569031595942854,  // 3
    1.08232323371113819152,  // 4
    1.03692775514336992633,  // 5
    1.01734306198444913971,  // 6
    1.00834927738192282684,  // 7
    1.00407735619794433938,  // 8
    1.00200839282608221442,  // 9
    1.00099457512781808534,  // 10
    1.00049418860411946456,  // 11
    1.0002460865533080483,  // 12
    1.00012271334757848915,  // 13
    1.00006124813505870483,  // 14
    1.00003058823630702049,  // 15
    1.00001528225940865187,  // 16
    1.00000763719763789976,  // 17
    1.00000381729326499984,  // 18
    1.00000190821271655394,  // 19
    1.0000009539620338728,  // 20
    1.00000047693298678781,  // 21
    1.00000023845050272773,  // 22
    1.00000011921992596531,  // 23
    1.00000005960818905126,  // 24
    1.00000002980350351465,  // 25
    1.00000001490155482837,  // 26
    1.00000000745071178984,  // 27
    1.00000000372533402479,  // 28
    1.00000000186265972351,  // 29
    1.00000000093132743242,  // 30
    1.0000000004656629065,  // 31
    1.00000000023283118337,  // 32
    1.00000000011641550173,  // 33
    1.00000000005820772088,  // 34
    1.00000000002910385044,  // 35
    1.00000000001455192189,  // 36
    1.00000000000727595984,  // 37
    1.00000000000363797955,  // 38
    1.00000000000181898965,  // 39
    1.00000000000090949478,  // 40
    1.00000000000045474738,  // 41
    1.00000000000022737368,  // 42
    1.00000000000011368684,  // 43
    1.00000000000005684342,  // 44
    1.00000000000002842171,  // 45
    1.00000000000001421085,  // 46
    1.00000000000000710543,  // 47
    1.00000000000000355271,  // 48
    1.00000000000000177636,  // 49
    1.00000000000000088818,  // 50
    1.00000000000000044409,  // 51
    1.00000000000000022204,  // 52
    1.00000000000000011102,  // 53
    1.00000000000000005551,  // 54
    1.00000000000000002776,  // 55
    1.00000000000000001388,  // 56
    1.00000000000000000694,  // 57
    1.00000000000000000347,  // 58
    1.00000000000000000173,  // 59
    1.00000000000000000087,  // 60
    1.00000000000000000043,  // 61
    1.00000000000000000022,  // 62
    1.00000000000000000011,  // 63
    1.00000000000000000005,  // 64
};

// ln n + gamma + 1/(2n) - sum B_2k / (2k n^2k), good to double precision for
// n >= 2^20.
double harmonic_asymptotic(double n) {
  const double inv2 = 1.0 / (n * n);
  const double tail = inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 / 252));
  return std::log(n) + std::numbers::egamma + 0.5 / n - tail;
}

}  // namespace

double harmonic_number(std::uint64_t n) { return harmonic_difference(0, n); }

double harmonic_difference(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) throw std::invalid_argument("harmonic_difference needs lo <= hi");
  if (hi < kExactHarmonicLimit) {
    // Smallest terms first.
    double sum = 0.0;
    for (std::uint64_t k = hi; k > lo; --k) sum += 1.0 / static_cast<double>(k);
    return sum;
  }
  if (lo >= kExactHarmonicLimit) {
    const double a = static_cast<double>(lo);
    const double b = static_cast<double>(hi);
    return (std::log(b / a) + 0.5 / b - 0.5 / a) -
           ((1.0 / (b * b) - 1.0 / (a * a)) / 12 - (1.0 / std::pow(b, 4) - 1.0 / std::pow(a, 4)) / 120);
  }
  return harmonic_asymptotic(static_cast<double>(hi)) - harmonic_difference(0, lo);
}

double digamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("digamma implemented for x > 0 only");
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  // B_2k / (2k) for k = 1..7
  const double series =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 -
                              inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12))))));
  return result + std::log(x) - 0.5 / x - series;
}

double digamma_int_plus_one(std::uint64_t n) { return harmonic_number(n) - std::numbers::egamma; }

double riemann_zeta(int j) {
  if (j < 2) throw std::domain_error("riemann_zeta needs j >= 2");
  if (j <= 64) return kZetaTable[static_cast<std::size_t>(j - 2)];
  // Past j = 64 only the k = 2 term survives in double precision, but keep
  // the series honest.
  double sum = 0.0;
  for (int k = 8; k >= 2; --k) sum += std::pow(static_cast<double>(k), -j);
  return 1.0 + sum;
}

double binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  if (n > 1020) return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
  double c = 1.0;
  for (std::uint64_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c) < 9007199254740992.0 ? std::round(c) : c;
}

}  // namespace qdarwin
