#pragma once

#include <cstdint>
#include <vector>

#include "mcb/interval.hpp"

namespace mcb {

double log_choose(std::int64_t n, std::int64_t k);

/// log of C(n,k) p^k (1-p)^(n-k); -inf where the mass is zero.
double log_binomial_pmf(std::int64_t n, double p, std::int64_t k);

/// P(X >= k) for X ~ Bin(n, p).
double binomial_upper_tail(std::int64_t n, double p, std::int64_t k);

/// P(X <= k) for X ~ Bin(n, p).
double binomial_lower_tail(std::int64_t n, double p, std::int64_t k);

/// Two-sided equal-tailed (eps/2 per side) Clopper-Pearson interval, closed.
Interval clopper_pearson(std::int64_t successes, std::int64_t n, double eps);

/// Bin(n, p) probabilities for k in [first, first + probs.size()), dropping
/// tail terms below `cutoff`.
struct PmfWindow {
  std::int64_t first = 0;
  std::vector<double> probs;
};
PmfWindow binomial_pmf_window(std::int64_t n, double p, double cutoff = 1e-30);

}  // namespace mcb
