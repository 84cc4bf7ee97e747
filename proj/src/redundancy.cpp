#include "qdarwin/redundancy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qdarwin {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelTol = 1e-10;

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

template <typename F>
double bisect_up(F&& reaches_target, double lo, double hi) {
  for (int it = 0; it < 400 && hi - lo > kRelTol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (reaches_target(mid) ? hi : lo) = mid;
  }
  return hi;
}

bool holds_information(const DecoherenceProfile& profile) {
  return entropy_h(profile.p0(), profile.total()).in_nats() > 0.0;
}

int count_infinite(const DecoherenceProfile& profile) {
  return static_cast<int>(std::ranges::count_if(profile.d(), [](double d) { return std::isinf(d); }));
}

double threshold_for(const DecoherenceProfile& profile, double delta) {
  return critical_d(profile.p0(), count_infinite(profile) > 0 ? kInf : profile.total(), delta);
}

}  // namespace

double critical_d(double p0, double d_total, double delta) {
  check_delta(delta);
  if (!(d_total > 0.0)) throw std::invalid_argument("critical_d needs d_S > 0");
  if (std::isinf(d_total)) {
    const double target = (1.0 - delta) * entropy_h(p0, kInf).in_nats();
    if (target <= 0.0) return 0.0;
    const auto reaches = [&](double d) { return entropy_h(p0, d).in_nats() >= target; };
    double hi = 1.0;
    while (!reaches(hi)) hi *= 2.0;
    return bisect_up(reaches, 0.0, hi);
  }
  const double h_total = entropy_h(p0, d_total).in_nats();
  const double target = (1.0 - delta) * h_total;
  if (target <= 0.0) return 0.0;
  const auto reaches = [&](double d) {
    return h_total + entropy_h(p0, d).in_nats() - entropy_h(p0, std::max(0.0, d_total - d)).in_nats() >= target;
  };
  return bisect_up(reaches, 0.0, d_total);
}

double redundancy_infdiv_at(const DecoherenceProfile& profile, double d_r) {
  if (!(d_r > 0.0)) throw std::invalid_argument("threshold must be positive");
  const int infinite = count_infinite(profile);
  if (infinite == 0) return profile.total() / d_r - 1.0;
  double finite = 0.0;
  for (double d : profile.d())
    if (!std::isinf(d)) finite += d;
  return (infinite - 1) + std::floor(finite / d_r);
}

double redundancy_infdiv(const DecoherenceProfile& profile, double delta) {
  check_delta(delta);
  if (!holds_information(profile)) return -1.0;
  return redundancy_infdiv_at(profile, threshold_for(profile, delta));
}

std::vector<EnvMask> greedy_partition(const DecoherenceProfile& profile, double d_r) {
  if (!(d_r >= 0.0)) throw std::invalid_argument("threshold must be nonnegative");
  std::vector<int> order(static_cast<std::size_t>(profile.n_env()));
  std::iota(order.begin(), order.end(), 0);
  const auto& d = profile.d();
  std::ranges::stable_sort(order, [&](int a, int b) { return d[a] > d[b]; });

  std::vector<EnvMask> parts;
  EnvMask current = 0;
  double filled = 0.0;
  for (int i : order) {
    current |= EnvMask{1} << i;
    filled += d[static_cast<std::size_t>(i)];
    if (filled >= d_r && d[static_cast<std::size_t>(i)] > 0.0) {
      parts.push_back(current);
      current = 0;
      filled = 0.0;
    }
  }
  if (current != 0 && !parts.empty()) parts.back() |= current;
  return parts;
}

RedundancyReport redundancy_partition(const DecoherenceProfile& profile, double delta) {
  check_delta(delta);
  RedundancyReport report;
  report.delta = delta;
  if (!holds_information(profile)) {
    report.d_r = kInf;
    report.r_infdiv = -1.0;
    return report;
  }
  report.d_r = threshold_for(profile, delta);
  report.r_infdiv = redundancy_infdiv_at(profile, report.d_r);
  report.parts = greedy_partition(profile, report.d_r);
  report.r_partition = static_cast<int>(report.parts.size());
  return report;
}

}  // namespace qdarwin
