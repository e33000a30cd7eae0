#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace cdperc {

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

/// Two-sided standard normal quantile for a confidence level in (0,1), by
/// bisection on erfc; the usual levels are exact constants.
inline double z_for_confidence(double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence level must lie in (0,1)");
  if (level == 0.95) return kZ95;
  if (level == 0.99) return kZ99;
  const double tail = 1.0 - level;
  double lo = 0.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::erfc(mid / std::sqrt(2.0)) > tail ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  double half_width() const noexcept { return 0.5 * (hi - lo); }
};

/// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::size_t successes, std::size_t trials, double z = kZ95) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double spread = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  const double lo = successes == 0 ? 0.0 : std::max(0.0, centre - spread);
  const double hi = successes == trials ? 1.0 : std::min(1.0, centre + spread);
  return {lo, hi};
}

struct MeanEstimate {
  double mean = 0.0;
  double half_width = 0.0;  // z * standard error
  std::size_t samples = 0;
};

inline MeanEstimate mean_with_ci(std::span<const double> xs, double z = kZ95) {
  MeanEstimate m;
  m.samples = xs.size();
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    const double var = ss / static_cast<double>(xs.size() - 1);
    m.half_width = z * std::sqrt(var / static_cast<double>(xs.size()));
  }
  return m;
}

/// Ratio estimator sum(num)/sum(den) over independent replicas with a
/// delta-method interval; accounts for within-replica correlation.
inline MeanEstimate ratio_with_ci(std::span<const double> num, std::span<const double> den, double z = kZ95) {
  MeanEstimate m;
  m.samples = num.size();
  const double n = static_cast<double>(num.size());
  double sn = 0.0, sd = 0.0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    sn += num[i];
    sd += den[i];
  }
  if (sd <= 0.0) return m;
  m.mean = sn / sd;
  if (num.size() > 1) {
    const double dbar = sd / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < num.size(); ++i) {
      const double r = num[i] - m.mean * den[i];
      ss += r * r;
    }
    m.half_width = z * std::sqrt(ss / (n - 1.0) / n) / dbar;
  }
  return m;
}

/// Run fn(i) for i in [0, count) on up to `threads` workers. Workers pull
/// indices from a shared counter; fn must write only to slot i, so results
/// never depend on scheduling.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(count);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace cdperc
