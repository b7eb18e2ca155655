#include "mcb/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "mcb/errors.hpp"

namespace mcb {

namespace {

constexpr std::int64_t kSampleLimit = std::int64_t{1} << 53;

void check(const BatchSchedule& s) {
  if (s.b < 1) throw InvalidConfig("batch size b must be >= 1");
  if (s.cap < 1) throw InvalidConfig("batch cap must be >= 1");
  if (!(s.a >= 1.0)) throw InvalidConfig("batch growth a must be >= 1");
  if (s.a > 1.0 && s.a < 1.001) throw InvalidConfig("batch growth a must be 1 or >= 1.001");
}

}  // namespace

std::int64_t batch_sizes(const BatchSchedule& schedule, std::int64_t i) {
  check(schedule);
  if (i < 0) throw InvalidConfig("batch index must be >= 0");
  const double raw = std::pow(schedule.a, static_cast<double>(i)) * static_cast<double>(schedule.b);
  if (!(raw < static_cast<double>(schedule.cap))) return schedule.cap;
  return std::clamp<std::int64_t>(std::llround(raw), 1, schedule.cap);
}

Checkpoints::Checkpoints(const BatchSchedule& schedule) : schedule_(schedule) {
  check(schedule_);
  if (schedule_.a == 1.0) {
    tail_batch_ = std::min(schedule_.b, schedule_.cap);
    return;
  }
  std::int64_t n = 0;
  for (std::int64_t i = 0;; ++i) {
    const std::int64_t size = batch_sizes(schedule_, i);
    n += size;
    prefix_.push_back(n);
    if (size >= schedule_.cap || n >= kSampleLimit) {
      tail_batch_ = size;
      break;
    }
  }
}

std::int64_t Checkpoints::n_at(std::size_t i) const {
  if (i < prefix_.size()) return prefix_[i];
  const std::int64_t base = prefix_.empty() ? 0 : prefix_.back();
  const auto extra = static_cast<std::int64_t>(i - prefix_.size()) + 1;
  if (extra > (kSampleLimit - base) / tail_batch_) throw OverflowGuard("checkpoint beyond 2^53 samples");
  return base + extra * tail_batch_;
}

std::int64_t Checkpoints::batch(std::size_t i) const {
  return i == 0 ? n_at(0) : n_at(i) - n_at(i - 1);
}

std::int64_t Checkpoints::last_index_within(std::int64_t n) const {
  if (n < n_at(0)) return -1;
  if (!prefix_.empty() && n < prefix_.back()) {
    const auto it = std::upper_bound(prefix_.begin(), prefix_.end(), n);
    return static_cast<std::int64_t>(it - prefix_.begin()) - 1;
  }
  const std::int64_t base = prefix_.empty() ? 0 : prefix_.back();
  const auto start = static_cast<std::int64_t>(prefix_.size());
  return start - 1 + (n - base) / tail_batch_;
}

}  // namespace mcb
