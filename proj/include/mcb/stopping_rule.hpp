#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mcb/buckets.hpp"
#include "mcb/row_store.hpp"
#include "mcb/schedule.hpp"
#include "mcb/simctest.hpp"

namespace mcb {

/// A run of S_n values [first, last] sharing one outcome at a check:
/// target >= 0 continues in that mode, target < 0 decides bucket -(target+1).
struct Segment {
  std::int64_t first = 0;
  std::int64_t last = -1;
  int target = 0;

  friend bool operator==(const Segment&, const Segment&) = default;
};

constexpr int decision_target(std::size_t bucket) { return -static_cast<int>(bucket) - 1; }
constexpr std::size_t decided_bucket(int target) { return static_cast<std::size_t>(-target - 1); }

/// Stopping rule on the (n, S_n) lattice, checked at the end of each batch.
///
/// The rule may carry a finite mode alongside S_n (Simctest tracks which
/// thresholds were already decided), so the pair (mode, S_n) is Markov.
class StoppingRule {
 public:
  virtual ~StoppingRule() = default;

  virtual const BucketSet& set() const = 0;
  virtual const Checkpoints& checkpoints() const = 0;
  virtual std::size_t mode_count() const = 0;
  virtual std::size_t initial_mode() const = 0;

  /// Appends to `out` the outcomes for S_n in [first, last] at check index
  /// `check` for a path alive in `mode`, ordered by S_n, adjacent runs merged.
  virtual void segments(std::size_t check, std::size_t mode, std::int64_t first,
                        std::int64_t last, std::vector<Segment>& out) const = 0;
};

/// Robbins-Lai rule: stop once I_n fits a bucket. Per check the S_n values
/// fitting each bucket form a range, found by galloping from the previous check.
class RlRule final : public StoppingRule {
 public:
  RlRule(const BucketSet& set, double eps, const BatchSchedule& schedule = {});

  const BucketSet& set() const override { return set_; }
  const Checkpoints& checkpoints() const override { return checkpoints_; }
  std::size_t mode_count() const override { return 1; }
  std::size_t initial_mode() const override { return 0; }
  void segments(std::size_t check, std::size_t mode, std::int64_t first, std::int64_t last,
                std::vector<Segment>& out) const override;

  double eps() const { return eps_; }

  /// S_n values [lo, hi] with I_n inside bucket b at check index `check`.
  std::pair<std::int64_t, std::int64_t> fit_range(std::size_t check, std::size_t bucket) const;

 private:
  struct Range {
    std::int64_t lo = 0;
    std::int64_t hi = -1;
  };
  void ensure(std::size_t check) const;

  BucketSet set_;
  double eps_;
  Checkpoints checkpoints_;
  mutable RowStore<Range> ranges_;  // set_.size() entries per check
  mutable std::vector<Range> previous_;
  mutable std::int64_t previous_n_ = 0;
};

/// Simctest rule over the thresholds of a bucket set. With boundaries monotone
/// in the threshold, the thresholds decided "above" form a prefix [0, a) and
/// those decided "below" a suffix [b, m); the mode is the pair (a, b).
class SimctestRule final : public StoppingRule {
 public:
  SimctestRule(const BucketSet& set, const SimctestTables& tables);

  const BucketSet& set() const override { return set_; }
  const Checkpoints& checkpoints() const override { return tables_.checkpoints(); }
  std::size_t mode_count() const override { return terminal_.size(); }
  std::size_t initial_mode() const override { return mode_index(0, m_); }

  /// Throws InvalidConfig if the rows used are not monotone in the threshold.
  void segments(std::size_t check, std::size_t mode, std::int64_t first, std::int64_t last,
                std::vector<Segment>& out) const override;

  std::size_t mode_index(std::size_t a, std::size_t b) const;
  std::pair<std::size_t, std::size_t> mode_pair(std::size_t mode) const;

  /// Interval implied by mode (a, b): (alpha_{a-1}, alpha_b].
  Interval mode_interval(std::size_t a, std::size_t b) const;

 private:
  BucketSet set_;
  const SimctestTables& tables_;
  std::size_t m_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::vector<int> terminal_;  // decision target, or 0 when the mode keeps sampling
};

/// Smallest checkpoint n after which no reachable (mode, S_n) state is alive.
/// Throws NotClosed(n_max) if states remain at n_max.
std::int64_t closure_check(const StoppingRule& rule, std::int64_t n_max);

/// Smallest n with rl_length_bound(n, eps) < c for the set's containment constant c.
/// Every Robbins-Lai run on an overlapping set stops by then. Throws NotClosed
/// for sets without a containment constant.
std::int64_t rl_stopping_bound(const BucketSet& set, double eps);

}  // namespace mcb
