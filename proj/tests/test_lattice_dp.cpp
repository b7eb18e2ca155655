#include <cmath>

#include "doctest.h"
#include "mcb/confseq_rl.hpp"
#include "mcb/errors.hpp"
#include "mcb/lattice_dp.hpp"
#include "oracles.hpp"

using namespace mcb;

namespace {

BucketSet toy_set() { return validate({Interval::closed(0.0, 0.6), Interval::left_open(0.4, 1.0)}, "toy"); }

oracle::LatticeOutcome rl_oracle(const BucketSet& set, double eps, double p, std::int64_t horizon,
                                 std::int64_t batch = 1) {
  return oracle::brute_force_lattice<int>(
      p, set.size(), horizon, 0, [&](std::int64_t n, std::int64_t s, int&) -> int {
        if (n % batch != 0) return -1;
        for (std::size_t b : set.priority()) {
          if (rl_contained({n, s, eps}, set[b])) return static_cast<int>(b);
        }
        return -1;
      });
}

oracle::LatticeOutcome simctest_oracle(const BucketSet& set, const SimctestTables& tables, double p,
                                       std::int64_t horizon) {
  const std::vector<int> start(tables.size(), 0);
  return oracle::brute_force_lattice<std::vector<int>>(
      p, set.size(), horizon, start, [&](std::int64_t n, std::int64_t s, std::vector<int>& st) -> int {
        SimctestState state;
        state.n = n;
        state.successes = s;
        for (std::size_t j = 0; j < tables.size(); ++j) {
          if (st[j] == 0) {
            const BoundaryRow& row = tables[j].row(static_cast<std::size_t>(n - 1));
            if (s >= row.upper) st[j] = 1;
            else if (s <= row.lower) st[j] = -1;
          }
          const ThresholdStatus status = st[j] > 0   ? ThresholdStatus::above
                                         : st[j] < 0 ? ThresholdStatus::below
                                                     : ThresholdStatus::undecided;
          state.hits.push_back({tables.thresholds()[j], status, n});
        }
        const auto fit = set.select_containing(simctest_interval(state));
        return fit ? static_cast<int>(*fit) : -1;
      });
}

void compare(const EffortResult& dp, const oracle::LatticeOutcome& bf) {
  CHECK(std::fabs(dp.expected_effort - bf.effort) < 1e-12 * std::max(1.0, bf.effort));
  CHECK(std::fabs(dp.residual_mass - bf.residual) < 1e-12);
  REQUIRE(dp.decision_probs.size() == bf.probs.size());
  for (std::size_t b = 0; b < bf.probs.size(); ++b) CHECK(std::fabs(dp.decision_probs[b] - bf.probs[b]) < 1e-12);
}

double total(const EffortResult& r) {
  double t = r.residual_mass + r.dropped_mass;
  for (double x : r.decision_probs) t += x;
  return t;
}

}  // namespace

TEST_CASE("single bucket stops at the first check") {
  const BucketSet single = bucket_set_single();
  const RlRule rl(single, 1e-3);
  for (double p : {0.0, 0.3, 1.0}) {
    const EffortResult r = effort_and_probs(p, rl);
    CHECK(r.expected_effort == 1.0);
    CHECK(r.decision_probs[0] == 1.0);
    CHECK_FALSE(r.truncated);
  }
  SimctestTables tables(single, SpendingSequence::standard(5e-4));
  const SimctestRule sim(single, tables);
  CHECK(effort_and_probs(0.7, sim).expected_effort == 1.0);
}

TEST_CASE("RL DP equals lattice enumeration on the toy set") {
  const BucketSet set = toy_set();
  const RlRule rule(set, 0.1);
  for (double p : {0.5, 0.45, 0.3, 0.62}) {
    for (std::int64_t horizon : {1, 7, 25, 30}) {
      DpOptions opt;
      opt.horizon = horizon;
      compare(effort_and_probs(p, rule, opt), rl_oracle(set, 0.1, p, horizon));
    }
  }
}

TEST_CASE("batched RL DP equals enumeration with checks at batch ends") {
  const BucketSet set = toy_set();
  const RlRule rule(set, 0.1, BatchSchedule{3, 1.0});
  DpOptions opt;
  opt.horizon = 30;
  compare(effort_and_probs(0.5, rule, opt), rl_oracle(set, 0.1, 0.5, 30, 3));
}

TEST_CASE("Simctest DP equals lattice enumeration on the toy set") {
  const BucketSet set = toy_set();
  SimctestTables tables(set, SpendingSequence::standard(0.05));
  const SimctestRule rule(set, tables);
  for (double p : {0.5, 0.4, 0.6, 0.2}) {
    for (std::int64_t horizon : {1, 12, 25, 30}) {
      DpOptions opt;
      opt.horizon = horizon;
      compare(effort_and_probs(p, rule, opt), simctest_oracle(set, tables, p, horizon));
    }
  }
}

TEST_CASE("Simctest DP with several thresholds equals enumeration") {
  const BucketSet set = validate({Interval::closed(0.0, 0.2), Interval::left_open(0.2, 0.5),
                                  Interval::left_open(0.5, 1.0), Interval::left_open(0.1, 0.3),
                                  Interval::left_open(0.4, 0.6)});
  SimctestTables tables(set, SpendingSequence::standard(0.05, 20.0));
  const SimctestRule rule(set, tables);
  CHECK(rule.mode_count() == 28);
  for (double p : {0.15, 0.35, 0.5}) {
    DpOptions opt;
    opt.horizon = 25;
    compare(effort_and_probs(p, rule, opt), simctest_oracle(set, tables, p, 25));
  }
}

TEST_CASE("probability conservation with trimming") {
  const BucketSet j = bucket_set_jstar();
  const RlRule rule(j, 1e-3);
  for (double p : {0.0007, 0.02, 0.3}) {
    for (std::int64_t horizon : {10, 1000, 100000}) {
      DpOptions opt;
      opt.horizon = horizon;
      opt.trim = 1e-25;
      const EffortResult r = effort_and_probs(p, rule, opt);
      CHECK(std::fabs(total(r) - 1.0) < 1e-9);
      CHECK(r.dropped_mass < 1e-15);
    }
  }
}

TEST_CASE("Simctest on J* decides the top bucket at p = 0.5") {
  const BucketSet j = bucket_set_jstar();
  SimctestTables tables(j, SpendingSequence::standard(5e-4));
  const SimctestRule rule(j, tables);
  const EffortResult r = effort_and_probs(0.5, rule);
  const std::size_t top = *j.index_of(Interval::left_open(0.05, 1.0));
  CHECK(r.decision_probs[top] >= 0.999);
  CHECK_FALSE(r.truncated);
}

TEST_CASE("RL segments match direct containment across row-store chunk edges") {
  // Seven ranges per check: checks 2340 and 4681 straddle chunk boundaries.
  const BucketSet j = bucket_set_jstar();
  const RlRule rule(j, 1e-3);
  for (std::size_t check : {std::size_t{0}, std::size_t{2339}, std::size_t{2340}, std::size_t{2341},
                            std::size_t{4681}}) {
    const std::int64_t n = rule.checkpoints().n_at(check);
    std::vector<Segment> segs;
    rule.segments(check, 0, 0, n, segs);
    for (const Segment& seg : segs) {
      for (std::int64_t s = seg.first; s <= seg.last; ++s) {
        int expected = 0;
        for (std::size_t b : j.priority()) {
          if (rl_contained({n, s, 1e-3}, j[b])) {
            expected = decision_target(b);
            break;
          }
        }
        REQUIRE(seg.target == expected);
      }
    }
  }
}

TEST_CASE("RL effort does not depend on evaluation order") {
  const BucketSet j = bucket_set_jstar();
  const RlRule fresh(j, 1e-3);
  const double direct = effort_and_probs(0.0007, fresh).expected_effort;
  const RlRule warmed(j, 1e-3);
  effort_and_probs(0.975, warmed);
  CHECK(effort_and_probs(0.0007, warmed).expected_effort == direct);
}
