#pragma once

// Scalar side of the Peierls estimate near t = 1.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cdperc/rational.hpp"

namespace cdperc {

/// Probability that both late conditions of case I hold; p is its fourth root.
inline const Rational kCaseOneLate{439, 18144};
inline const Rational kCaseTwoLate{289, 12096};
inline const Rational kSharedFrontalLate{2, 15};

struct PeierlsParams {
  double t = 1.0;
  double eps = 0.0;        // (1-t)^(1/9)
  double p = 0.0;          // (439/18144)^(1/4)
  double alpha = 0.0;      // 9 (p+eps)^2 / 2
  double eps_bar = 0.0;    // (2/3+eps) eps / p^2
  double eps_tilde = 0.0;  // (2/3+eps) alpha eps_bar
  double beta = 0.0;       // 1/2 - 1/(2 sqrt(4 alpha + 1))
  double delta = 0.0;      // (2/3+eps) [1/2 + 1/2 sqrt(18 (p+eps)^2 + 1)]

  bool summable = false;    // delta < 1
  double tail_ratio = 0.0;  // eps_tilde / (1 - delta); +inf when not summable

  // (1-b)^(1-b) / (b^b (1-2b)^(1-2b)) * a^b against (1-b)/(1-2b)
  double stirling_lhs = 0.0;
  double stirling_rhs = 0.0;
  double stirling_residual() const { return std::abs(stirling_lhs - stirling_rhs); }
};

inline PeierlsParams peierls_eval(double t) {
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("peierls_eval: t must lie in (0,1]");
  PeierlsParams q;
  q.t = t;
  q.eps = std::pow(1.0 - t, 1.0 / 9.0);
  q.p = std::pow(kCaseOneLate.to_double(), 0.25);
  const double pe = q.p + q.eps;
  const double lead = 2.0 / 3.0 + q.eps;
  q.alpha = 9.0 * pe * pe / 2.0;
  q.eps_bar = lead * q.eps / (q.p * q.p);
  q.eps_tilde = lead * q.alpha * q.eps_bar;
  q.beta = 0.5 - 1.0 / (2.0 * std::sqrt(4.0 * q.alpha + 1.0));
  q.delta = lead * (0.5 + 0.5 * std::sqrt(18.0 * pe * pe + 1.0));
  q.summable = q.delta < 1.0;
  q.tail_ratio = q.summable ? q.eps_tilde / (1.0 - q.delta) : std::numeric_limits<double>::infinity();

  const double b = q.beta;
  q.stirling_lhs = std::pow(1.0 - b, 1.0 - b) / (std::pow(b, b) * std::pow(1.0 - 2.0 * b, 1.0 - 2.0 * b)) *
                   std::pow(q.alpha, b);
  q.stirling_rhs = (1.0 - b) / (1.0 - 2.0 * b);
  return q;
}

/// Maximiser of f(s) = alpha^s C(k-s-1, s-1) over integers 1 <= s <= k/2,
/// against the closed form ceil(r1).
struct Prop1Result {
  int k = 0;
  double alpha = 0.0;
  int scan_argmax = 0;
  double r1 = 0.0;
  int closed_form = 0;  // ceil(r1), clamped into [1, floor(k/2)]
  bool clamped = false;
  bool near_tie = false;  // runner-up within 1e-9 relative of the maximum
  bool agree() const noexcept { return scan_argmax == closed_form; }
};

inline double prop1_log_f(int k, int s, double alpha) {
  // log of alpha^s * C(k-s-1, s-1)
  const double n = k - s - 1, j = s - 1;
  return s * std::log(alpha) + std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
}

inline double prop1_r1(int k, double alpha) {
  const double kd = k;
  const double disc = (4.0 * alpha + 1.0) * kd * (kd - 2.0) + (2.0 * alpha + 1.0) * (2.0 * alpha + 1.0);
  return kd / 2.0 - (2.0 * alpha + 1.0 + std::sqrt(disc)) / (8.0 * alpha + 2.0);
}

inline Prop1Result prop1_argmax(int k, double alpha) {
  if (k < 2) throw std::invalid_argument("prop1_argmax: k must be >= 2");
  if (!(alpha > 0.0)) throw std::invalid_argument("prop1_argmax: alpha must be positive");
  Prop1Result res;
  res.k = k;
  res.alpha = alpha;
  const int s_max = k / 2;
  double best = -std::numeric_limits<double>::infinity(), second = best;
  for (int s = 1; s <= s_max; ++s) {
    const double v = prop1_log_f(k, s, alpha);
    if (v > best) {
      second = best;
      best = v;
      res.scan_argmax = s;
    } else if (v > second) {
      second = v;
    }
  }
  res.near_tie = std::isfinite(second) && best - second < 1e-9;
  res.r1 = prop1_r1(k, alpha);
  const int raw = static_cast<int>(std::ceil(res.r1));
  res.closed_form = std::clamp(raw, 1, s_max);
  res.clamped = res.closed_form != raw;
  return res;
}

inline std::vector<Prop1Result> prop1_sweep(int k_max, double alpha) {
  std::vector<Prop1Result> out;
  for (int k = 2; k <= k_max; ++k) out.push_back(prop1_argmax(k, alpha));
  return out;
}

}  // namespace cdperc
