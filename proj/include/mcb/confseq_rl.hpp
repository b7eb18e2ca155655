#pragma once

#include <cstdint>

#include "mcb/buckets.hpp"
#include "mcb/interval.hpp"

namespace mcb {

/// Sequential state of the Robbins-Lai confidence sequence.
struct RLState {
  std::int64_t n = 0;
  std::int64_t successes = 0;  // exceedances S_n
  double eps = 1e-3;
};

/// Adds a batch. Throws InvalidConfig if exceedances > batch, OverflowGuard
/// past 2^53 samples.
RLState rl_update(const RLState& state, std::int64_t exceedances, std::int64_t batch);

/// log((n+1) * C(n,S) p^S (1-p)^(n-S)).
double rl_log_level(std::int64_t n, std::int64_t successes, double p);

/// Whether inf I_n respects min J (with its closure). Non-decreasing in S_n for n >= 1.
bool rl_lower_ok(std::int64_t n, std::int64_t successes, double log_eps, const Bucket& bucket);

/// Whether sup I_n respects max J. Non-increasing in S_n for n >= 1.
bool rl_upper_ok(std::int64_t n, std::int64_t successes, double log_eps, const Bucket& bucket);

/// Whether I_n = {p : (n+1) b(n,p,S_n) > eps} is a subset of `bucket`. Exact:
/// evaluates the level at the bucket endpoints and the sign of its slope there,
/// no root finding.
bool rl_contained(const RLState& state, const Bucket& bucket);

/// I_n with its roots located by bisection to 1e-12.
Interval rl_interval(const RLState& state);

/// Upper bound sqrt((2/n) log((n+1)/eps)) on the length of I_n.
double rl_length_bound(std::int64_t n, double eps);

}  // namespace mcb
