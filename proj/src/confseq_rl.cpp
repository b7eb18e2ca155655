#include "mcb/confseq_rl.hpp"

#include <cmath>
#include <limits>

#include "mcb/binomial.hpp"
#include "mcb/errors.hpp"

namespace mcb {

namespace {

constexpr std::int64_t kMaxSamples = std::int64_t{1} << 53;

}  // namespace

RLState rl_update(const RLState& state, std::int64_t exceedances, std::int64_t batch) {
  if (batch < 0 || exceedances < 0 || exceedances > batch) {
    throw InvalidConfig("rl_update: need 0 <= exceedances <= batch");
  }
  if (batch > kMaxSamples - state.n) throw OverflowGuard("rl_update: sample count overflow");
  RLState next = state;
  next.n += batch;
  next.successes += exceedances;
  return next;
}

double rl_log_level(std::int64_t n, std::int64_t successes, double p) {
  return std::log(static_cast<double>(n) + 1.0) + log_binomial_pmf(n, p, successes);
}

bool rl_lower_ok(std::int64_t n, std::int64_t successes, double log_eps, const Bucket& bucket) {
  if (successes == 0) return bucket.lo == 0.0 && bucket.lo_closed;
  // For S_n > 0 the level vanishes at 0, so inf I_n > 0. The slope sign
  // S/p - (n-S)/(1-p) >= 0 at min J is equivalent to n p <= S.
  if (bucket.lo == 0.0) return true;
  return static_cast<double>(n) * bucket.lo <= static_cast<double>(successes) &&
         rl_log_level(n, successes, bucket.lo) <= log_eps;
}

bool rl_upper_ok(std::int64_t n, std::int64_t successes, double log_eps, const Bucket& bucket) {
  if (successes == n) return bucket.hi == 1.0 && bucket.hi_closed;
  if (bucket.hi == 1.0) return true;
  return static_cast<double>(n) * bucket.hi >= static_cast<double>(successes) &&
         rl_log_level(n, successes, bucket.hi) <= log_eps;
}

bool rl_contained(const RLState& state, const Bucket& bucket) {
  if (state.n == 0) return Interval::unit().subset_of(bucket);
  const double log_eps = std::log(state.eps);
  return rl_lower_ok(state.n, state.successes, log_eps, bucket) &&
         rl_upper_ok(state.n, state.successes, log_eps, bucket);
}

namespace {

// Bisection for the crossing of the level with log(eps) on [lo, hi], where the
// level is above eps at `inside` and below at the other end.
double level_root(std::int64_t n, std::int64_t s, double log_eps, double inside, double outside) {
  double a = inside;
  double b = outside;
  while (std::fabs(b - a) > 1e-13) {
    const double mid = 0.5 * (a + b);
    if (rl_log_level(n, s, mid) > log_eps) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

Interval rl_interval(const RLState& state) {
  const std::int64_t n = state.n;
  const std::int64_t s = state.successes;
  if (n == 0) return Interval::unit();
  const double log_eps = std::log(state.eps);
  if (s == 0) return {0.0, level_root(n, s, log_eps, 0.0, 1.0), true, false};
  if (s == n) return {level_root(n, s, log_eps, 1.0, 0.0), 1.0, false, true};
  const double mode = static_cast<double>(s) / static_cast<double>(n);
  return {level_root(n, s, log_eps, mode, 0.0), level_root(n, s, log_eps, mode, 1.0), false, false};
}

double rl_length_bound(std::int64_t n, double eps) {
  const auto nd = static_cast<double>(n);
  return std::sqrt(2.0 / nd * std::log((nd + 1.0) / eps));
}

}  // namespace mcb
