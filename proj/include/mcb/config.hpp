#pragma once

#include <cstdint>
#include <string>

#include "mcb/engine.hpp"

namespace mcb {

/// Settings shared by the command-line tools.
struct RunConfig {
  std::string buckets = "Jstar";  // named set or path to a bucket JSON file
  Method method = Method::simctest;
  double eps = 1e-3;
  double rho = 0.0;  // 0: eps / 2 for decisions
  double spending_k = 1000.0;
  std::int64_t batch_b = 1;
  double batch_a = 1.0;
  std::uint64_t seed = 1;
  std::int64_t n_cap = 10'000'000;
  std::int64_t grid = 200;
  std::string out;  // empty: stdout

  BatchSchedule schedule() const { return {batch_b, batch_a}; }
  EngineOptions engine_options() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

std::string config_to_json(const RunConfig& config);
/// Missing keys keep their defaults; unknown keys are rejected with InvalidConfig.
RunConfig config_from_json(const std::string& text);

}  // namespace mcb
