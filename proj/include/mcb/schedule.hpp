#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mcb {

/// Batch i has round(a^i * b) samples, clamped to `cap`.
struct BatchSchedule {
  std::int64_t b = 1;
  double a = 1.0;
  std::int64_t cap = std::int64_t{1} << 40;

  static BatchSchedule every_sample() { return {}; }
  friend bool operator==(const BatchSchedule&, const BatchSchedule&) = default;
};

std::int64_t batch_sizes(const BatchSchedule& schedule, std::int64_t i);

/// Cumulative sample counts n_0 < n_1 < ... at which stopping is checked.
///
/// Growth factors in (1, 1.001) are rejected since they would need an
/// impractically long geometric prefix.
class Checkpoints {
 public:
  explicit Checkpoints(const BatchSchedule& schedule = {});

  const BatchSchedule& schedule() const { return schedule_; }

  /// Sample count after check index i.
  std::int64_t n_at(std::size_t i) const;

  /// Samples drawn in batch i.
  std::int64_t batch(std::size_t i) const;

  bool every_sample() const { return schedule_.b == 1 && schedule_.a == 1.0; }

  /// Largest check index whose sample count is <= n, or -1.
  std::int64_t last_index_within(std::int64_t n) const;

 private:
  BatchSchedule schedule_;
  // Geometric prefix until batches saturate; afterwards batches are constant.
  std::vector<std::int64_t> prefix_;
  std::int64_t tail_batch_ = 1;
};

}  // namespace mcb
