#include "mcb/binomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcb/errors.hpp"
#include "mcb/special_functions.hpp"

namespace mcb {

double log_choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  if (k == 0 || k == n) return 0.0;
  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k);
  return log_gamma(nd + 1.0) - log_gamma(kd + 1.0) - log_gamma(nd - kd + 1.0);
}

double log_binomial_pmf(std::int64_t n, double p, std::int64_t k) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (k < 0 || k > n) return kNegInf;
  if (p <= 0.0) return k == 0 ? 0.0 : kNegInf;
  if (p >= 1.0) return k == n ? 0.0 : kNegInf;
  const auto kd = static_cast<double>(k);
  const auto rest = static_cast<double>(n - k);
  return log_choose(n, k) + kd * std::log(p) + rest * std::log1p(-p);
}

double binomial_upper_tail(std::int64_t n, double p, std::int64_t k) {
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  return incomplete_beta(static_cast<double>(k), static_cast<double>(n - k + 1), p);
}

double binomial_lower_tail(std::int64_t n, double p, std::int64_t k) {
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  return 1.0 - binomial_upper_tail(n, p, k + 1);
}

namespace {

// Root of an increasing function on [0,1] to absolute tolerance 1e-12.
template <class F>
double bisect_increasing(F f, double target) {
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Interval clopper_pearson(std::int64_t successes, std::int64_t n, double eps) {
  if (n < 1 || successes < 0 || successes > n) {
    throw InvalidConfig("clopper_pearson needs 0 <= S <= n and n >= 1");
  }
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidConfig("clopper_pearson needs eps in (0,1)");
  const double half = 0.5 * eps;
  double lo = 0.0;
  double hi = 1.0;
  if (successes > 0) {
    lo = bisect_increasing([&](double p) { return binomial_upper_tail(n, p, successes); }, half);
  }
  if (successes < n) {
    hi = bisect_increasing([&](double p) { return -binomial_lower_tail(n, p, successes); }, -half);
  }
  return Interval::closed(lo, hi);
}

PmfWindow binomial_pmf_window(std::int64_t n, double p, double cutoff) {
  PmfWindow out;
  if (n <= 0 || p <= 0.0) {
    out.probs = {1.0};
    return out;
  }
  if (p >= 1.0) {
    out.first = n;
    out.probs = {1.0};
    return out;
  }
  if (n == 1) {
    out.probs = {1.0 - p, p};
    return out;
  }
  const auto mode = std::clamp<std::int64_t>(
      static_cast<std::int64_t>(std::floor((static_cast<double>(n) + 1.0) * p)), 0, n);
  const double log_mode = log_binomial_pmf(n, p, mode);
  const double ratio = p / (1.0 - p);
  // Walk outwards from the mode with the pmf ratio recurrence.
  std::vector<double> up{1.0};
  for (std::int64_t k = mode; k < n; ++k) {
    const double next = up.back() * ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
    if (next * std::exp(log_mode) < cutoff) break;
    up.push_back(next);
  }
  std::vector<double> down;
  double cur = 1.0;
  for (std::int64_t k = mode; k > 0; --k) {
    cur = cur / ratio * static_cast<double>(k) / static_cast<double>(n - k + 1);
    if (cur * std::exp(log_mode) < cutoff) break;
    down.push_back(cur);
  }
  out.first = mode - static_cast<std::int64_t>(down.size());
  out.probs.reserve(down.size() + up.size());
  out.probs.assign(down.rbegin(), down.rend());
  out.probs.insert(out.probs.end(), up.begin(), up.end());
  // Normalise by the window sum: exp(log_mode) carries the log-gamma rounding
  // error, while the dropped tails are below the cutoff.
  double total = 0.0;
  for (double x : out.probs) total += x;
  for (double& x : out.probs) x /= total;
  return out;
}

}  // namespace mcb
