#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mcb/buckets.hpp"
#include "mcb/schedule.hpp"
#include "mcb/simctest.hpp"
#include "mcb/stopping_rule.hpp"
#include "mcb/stream.hpp"

namespace mcb {

enum class Method { rl, simctest };

std::string to_string(Method method);
Method parse_method(const std::string& name);

struct EngineOptions {
  Method method = Method::simctest;
  double eps = 1e-3;
  /// Simctest risk per threshold; 0 means eps / 2, anything else must equal it.
  double rho = 0.0;
  double spending_k = 1000.0;
  BatchSchedule schedule{};
  std::int64_t n_cap = 10'000'000;
};

struct DecisionReport {
  Bucket bucket;
  std::size_t bucket_index = 0;
  RatingCode rating;
  std::int64_t samples_used = 0;
  std::int64_t successes = 0;
  Method method = Method::simctest;
  bool truncated = false;
  std::vector<ThresholdHit> hits;  // Simctest only
};

std::string report_to_json(const DecisionReport& report);

/// Shared, read-only configuration for many runs on one bucket set. Simctest
/// boundary tables are built lazily and shared across runs and threads.
class Engine {
 public:
  Engine(BucketSet set, const EngineOptions& options);

  const BucketSet& set() const { return set_; }
  const EngineOptions& options() const { return options_; }
  const Checkpoints& checkpoints() const { return checkpoints_; }
  const SimctestTables* tables() const { return tables_.get(); }
  const RlRule* rl_rule() const { return rl_.get(); }

  /// RL fit ranges are cached for this many checks; later checks evaluate directly.
  static constexpr std::size_t kRlCachedChecks = std::size_t{1} << 18;

  DecisionReport run(ExceedanceStream& stream) const;

 private:
  BucketSet set_;
  EngineOptions options_;
  Checkpoints checkpoints_;
  std::unique_ptr<SimctestTables> tables_;
  std::unique_ptr<RlRule> rl_;
};

/// One hypothesis advanced batch by batch.
class Decider {
 public:
  explicit Decider(const Engine& engine);

  bool done() const { return done_; }
  /// Size of the next batch, or 0 when the next checkpoint would pass n_cap.
  std::int64_t next_batch_size() const;
  void feed(std::int64_t exceedances);
  /// Stops without a decision, reporting the bucket containing S_n / n.
  void truncate();
  DecisionReport report() const;

 private:
  void finish(std::size_t bucket, bool truncated);
  bool decide_rl();
  bool decide_simctest();

  const Engine& engine_;
  std::size_t check_ = 0;
  std::int64_t n_ = 0;
  std::int64_t successes_ = 0;
  std::vector<ThresholdStatus> status_;
  std::vector<std::int64_t> hit_n_;
  bool done_ = false;
  DecisionReport report_;
};

/// Convenience wrapper: build an Engine and run one stream.
DecisionReport run(ExceedanceStream& stream, const BucketSet& set, const EngineOptions& options);

}  // namespace mcb
