#pragma once

// Independent reference implementations used by tests and the acceptance binary.
// They enumerate sample paths directly instead of propagating distributions.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "mcb/buckets.hpp"
#include "mcb/confseq_rl.hpp"
#include "mcb/simctest.hpp"

namespace oracle {

struct BoundaryPoint {
  std::int64_t n;
  std::int64_t lower;
  std::int64_t upper;
  double spent_lower;
  double spent_upper;
};

/// Simctest boundaries at the given checkpoints (all <= 24) by enumerating
/// every 0/1 path of length n at each checkpoint.
inline std::vector<BoundaryPoint> brute_force_boundaries(double alpha,
                                                         const mcb::SpendingSequence& spending,
                                                         const std::vector<std::int64_t>& checks) {
  std::vector<BoundaryPoint> out;
  for (std::size_t c = 0; c < checks.size(); ++c) {
    const std::int64_t n = checks[c];
    // Per path: alive at n (no hit at earlier checks) or the side of its first hit.
    std::map<std::int64_t, double> alive;  // S_n -> probability
    double upper_before = 0.0;
    double lower_before = 0.0;
    for (std::uint64_t path = 0; path < (std::uint64_t{1} << n); ++path) {
      std::int64_t s = 0;
      int hit = 0;  // +1 upper, -1 lower
      std::size_t next = 0;
      for (std::int64_t k = 1; k <= n; ++k) {
        s += static_cast<std::int64_t>((path >> (k - 1)) & 1U);
        if (next < c && checks[next] == k) {
          if (s >= out[next].upper) {
            hit = 1;
            break;
          }
          if (s <= out[next].lower) {
            hit = -1;
            break;
          }
          ++next;
        }
      }
      const int ones = __builtin_popcountll(path);
      const double w = std::pow(alpha, ones) * std::pow(1.0 - alpha, static_cast<double>(n - ones));
      if (hit == 1) {
        upper_before += w;
      } else if (hit == -1) {
        lower_before += w;
      } else {
        alive[s] += w;
      }
    }
    BoundaryPoint row{n, -1, 2, 0.0, 0.0};
    if (!(c == 0 && n == 1)) {
      const double eps = mcb::spending_eval(spending, n);
      // U_n = min{j >= 0 : P(alive, S_n >= j) + upper_before <= eps}.
      for (std::int64_t j = 0; j <= n + 1; ++j) {
        double tail = 0.0;
        for (const auto& [s, w] : alive) {
          if (s >= j) tail += w;
        }
        if (tail + upper_before <= eps) {
          row.upper = j;
          break;
        }
      }
      // L_n = max{j : P(alive, S_n <= j) + lower_before <= eps}.
      row.lower = -1;
      for (std::int64_t j = 0; j <= n; ++j) {
        double low = 0.0;
        for (const auto& [s, w] : alive) {
          if (s <= j) low += w;
        }
        if (low + lower_before > eps) break;
        row.lower = j;
      }
    }
    double new_upper = 0.0;
    double new_lower = 0.0;
    for (const auto& [s, w] : alive) {
      if (s >= row.upper) new_upper += w;
      if (s <= row.lower) new_lower += w;
    }
    row.spent_upper = upper_before + new_upper;
    row.spent_lower = lower_before + new_lower;
    out.push_back(row);
  }
  return out;
}

struct LatticeOutcome {
  double effort = 0.0;
  std::vector<double> probs;
  double residual = 0.0;
};

/// Walks every (n, S_n) lattice node reachable before stopping, carrying the
/// binomial path count and a caller-supplied path state; `decide` returns a
/// bucket index or -1, and may update the state. Equivalent paths (same S_n
/// and same state) are merged so the walk stays polynomial.
template <class State>
LatticeOutcome brute_force_lattice(
    double p, std::size_t buckets, std::int64_t horizon, const State& initial,
    const std::function<int(std::int64_t n, std::int64_t s, State& state)>& decide) {
  LatticeOutcome out;
  out.probs.assign(buckets, 0.0);
  // Path counts are exact doubles for n <= 52; weight = count * p^s (1-p)^(n-s).
  std::map<std::pair<std::int64_t, State>, double> layer{{{0, initial}, 1.0}};
  for (std::int64_t n = 1; n <= horizon; ++n) {
    std::map<std::pair<std::int64_t, State>, double> next;
    for (const auto& [key, count] : layer) {
      for (int x = 0; x <= 1; ++x) next[{key.first + x, key.second}] += count;
    }
    layer.clear();
    for (auto [key, count] : next) {
      State st = key.second;
      const int d = decide(n, key.first, st);
      const double w = count * std::pow(p, static_cast<double>(key.first)) *
                       std::pow(1.0 - p, static_cast<double>(n - key.first));
      if (d >= 0) {
        out.probs[static_cast<std::size_t>(d)] += w;
        out.effort += static_cast<double>(n) * w;
      } else {
        layer[{key.first, st}] += count;
      }
    }
  }
  for (const auto& [key, count] : layer) {
    const double w = count * std::pow(p, static_cast<double>(key.first)) *
                     std::pow(1.0 - p, static_cast<double>(horizon - key.first));
    out.residual += w;
    out.effort += static_cast<double>(horizon) * w;
  }
  return out;
}

/// Clopper-Pearson endpoint by plain bisection on the binomial tail sums.
inline double binomial_tail_sum(std::int64_t n, double p, std::int64_t from, std::int64_t to) {
  double total = 0.0;
  for (std::int64_t k = from; k <= to; ++k) {
    total += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                      (k ? k * std::log(p) : 0.0) + (n - k ? (n - k) * std::log1p(-p) : 0.0));
  }
  return total;
}

}  // namespace oracle
