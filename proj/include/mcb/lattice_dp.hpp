#pragma once

#include <cstdint>
#include <vector>

#include "mcb/stopping_rule.hpp"

namespace mcb {

struct DpOptions {
  /// Last sample count processed; mass alive beyond it is residual.
  std::int64_t horizon = 10'000'000;
  /// Stop early once the alive mass is at most this.
  double stop_mass = 0.0;
  /// Cells at a window edge with mass below this are dropped (tracked in dropped_mass).
  double trim = 0.0;
};

struct EffortResult {
  /// E[min(tau, horizon)]: residual mass counts as stopping at the horizon.
  double expected_effort = 0.0;
  std::vector<double> decision_probs;  // by bucket index
  double residual_mass = 0.0;
  double dropped_mass = 0.0;
  std::int64_t horizon = 0;  // last sample count processed
  bool truncated = false;    // residual_mass > 0
};

/// Exact forward DP on P_p(not stopped, mode, S_n = s), checked at the rule's checkpoints.
EffortResult effort_and_probs(double p, const StoppingRule& rule, const DpOptions& options = {});

}  // namespace mcb
