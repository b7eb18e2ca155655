// Acceptance checks. Prints one PASS/FAIL line per criterion; pass criterion
// numbers as arguments to run a subset.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "mcb/analysis.hpp"
#include "mcb/confseq_rl.hpp"
#include "mcb/engine.hpp"
#include "mcb/errors.hpp"
#include "mcb/lattice_dp.hpp"
#include "mcb/parallel.hpp"
#include "oracles.hpp"

using namespace mcb;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome integrated_effort_check() {
  const Table2 t = table2(1e-3, 1000.0);
  const double expected[3][3] = {{2228, 1853, 975}, {16878, 13837, 7126}, {40059, 30896, 15885}};
  bool ok = true;
  std::string detail;
  double worst = 0.0;
  for (int d = 0; d < 3; ++d) {
    for (int c = 0; c < 3; ++c) {
      const double rel = t.value[d][c] / expected[d][c] - 1.0;
      worst = std::max(worst, std::fabs(rel));
      ok = ok && std::fabs(rel) <= 0.05;
      detail += fmt("%.1f ", t.value[d][c]);
    }
    detail += "| ";
  }
  return {ok, detail + fmt("max rel dev %.3f", worst)};
}

Outcome boundary_oracle_check() {
  std::vector<std::int64_t> checks;
  for (std::int64_t n = 1; n <= 20; ++n) checks.push_back(n);
  int mismatches = 0;
  double worst = 0.0;
  for (double alpha : {0.01, 0.05}) {
    for (double rho : {1e-2, 5e-4}) {
      const SpendingSequence spending = SpendingSequence::standard(rho);
      const auto expected = oracle::brute_force_boundaries(alpha, spending, checks);
      const auto table = build_boundaries(alpha, spending, 20);
      for (std::size_t i = 0; i < checks.size(); ++i) {
        const BoundaryRow& r = table->row(i);
        if (r.n != expected[i].n || r.lower != expected[i].lower || r.upper != expected[i].upper) ++mismatches;
        worst = std::max({worst, std::fabs(r.spent_lower - expected[i].spent_lower),
                          std::fabs(r.spent_upper - expected[i].spent_upper)});
      }
    }
  }
  return {mismatches == 0 && worst <= 1e-12, fmt("integer mismatches %d, max mass diff %.2e", mismatches, worst)};
}

double max_diff(const EffortResult& dp, const oracle::LatticeOutcome& bf) {
  double d = std::max(std::fabs(dp.expected_effort - bf.effort) / std::max(1.0, bf.effort),
                      std::fabs(dp.residual_mass - bf.residual));
  for (std::size_t b = 0; b < bf.probs.size(); ++b) d = std::max(d, std::fabs(dp.decision_probs[b] - bf.probs[b]));
  return d;
}

Outcome dp_oracle_check() {
  const BucketSet set = validate({Interval::closed(0.0, 0.6), Interval::left_open(0.4, 1.0)}, "toy");
  const double eps = 0.1;
  const RlRule rl(set, eps);
  SimctestTables tables(set, SpendingSequence::standard(eps / 2));
  const SimctestRule sim(set, tables);
  double worst = 0.0;
  int cases = 0;
  for (double p : {0.2, 0.4, 0.5, 0.6, 0.75}) {
    for (std::int64_t horizon : {1, 5, 12, 20, 25}) {
      DpOptions opt;
      opt.horizon = horizon;
      const auto rl_bf = oracle::brute_force_lattice<int>(
          p, set.size(), horizon, 0, [&](std::int64_t n, std::int64_t s, int&) -> int {
            for (std::size_t b : set.priority()) {
              if (rl_contained({n, s, eps}, set[b])) return static_cast<int>(b);
            }
            return -1;
          });
      worst = std::max(worst, max_diff(effort_and_probs(p, rl, opt), rl_bf));
      const auto sim_bf = oracle::brute_force_lattice<std::vector<int>>(
          p, set.size(), horizon, std::vector<int>(tables.size(), 0),
          [&](std::int64_t n, std::int64_t s, std::vector<int>& st) -> int {
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
      worst = std::max(worst, max_diff(effort_and_probs(p, sim, opt), sim_bf));
      cases += 2;
    }
  }
  return {worst <= 1e-12, fmt("%d cases, max diff %.2e", cases, worst)};
}

Outcome risk_check() {
  const double eps = 0.01;
  const int runs = 10000;
  const double limit = eps + 3.0 * std::sqrt(eps * (1 - eps) / runs);
  const BucketSet j = bucket_set_jstar();
  bool ok = true;
  std::string detail;
  for (Method m : {Method::rl, Method::simctest}) {
    EngineOptions o;
    o.method = m;
    o.eps = eps;
    const Engine engine(j, o);
    detail += to_string(m) + ":";
    for (double p : {0.0005, 0.001, 0.01, 0.05, 0.2}) {
      std::atomic<int> misses{0};
      parallel_for(runs, [&](std::size_t r) {
        BernoulliStream s(p, 20240601, r);
        if (!engine.run(s).bucket.contains(p)) ++misses;
      });
      const double rate = static_cast<double>(misses) / runs;
      ok = ok && rate <= limit;
      detail += fmt(" %.4f", rate);
    }
    detail += "  ";
  }
  return {ok, detail + fmt("(limit %.4f)", limit)};
}

Outcome length_bound_check() {
  int triples = 0;
  int violations = 0;
  double tightest = 1e300;
  for (int i = 0; i < 25; ++i) {
    const auto n = static_cast<std::int64_t>(std::llround(std::pow(10.0, 6.0 * i / 24.0)));
    for (int k = 0; k < 20; ++k) {
      const auto s = static_cast<std::int64_t>(std::llround(static_cast<double>(n) * k / 19.0));
      for (int e = 0; e < 20; ++e) {
        const double eps = std::pow(10.0, -1.0 - 5.0 * e / 19.0);
        const Interval in = rl_interval({n, s, eps});
        const double bound = rl_length_bound(n, eps);
        // Endpoints are located to 1e-12.
        if (in.hi - in.lo > bound + 2e-12) ++violations;
        tightest = std::min(tightest, bound - (in.hi - in.lo));
        ++triples;
      }
    }
  }
  return {violations == 0 && triples == 10000, fmt("%d triples, %d violations, min slack %.3g", triples, violations, tightest)};
}

Outcome closure_check_all() {
  const BucketSet j = bucket_set_jstar();
  const SimctestTables tables(j, SpendingSequence::standard(5e-4));
  const std::int64_t closure = closure_time(j, tables, 100'000'000);
  const auto ptrs = tables.pointers();
  const bool mono = check_monotone(ptrs, closure);
  bool j0_open = false;
  const BucketSet j0 = bucket_set_j0();
  const SimctestTables t0(j0, SpendingSequence::standard(5e-4));
  try {
    closure_time(j0, t0, 1'000'000);
  } catch (const NotClosed&) {
    j0_open = true;
  }
  return {mono && j0_open, fmt("J* closure n=%lld, monotone=%d, J0 NotClosed at 1e6=%d",
                               static_cast<long long>(closure), mono ? 1 : 0, j0_open ? 1 : 0)};
}

Outcome rating_check() {
  const BucketSet j = bucket_set_jstar();
  const std::vector<std::pair<Bucket, std::string>> expected_codes{
      {Interval::closed(0.0, 1e-3), "***"},        {Interval::left_open(1e-3, 0.01), "**"},
      {Interval::left_open(0.01, 0.05), "*"},      {Interval::left_open(0.05, 1.0), ""},
      {Interval::left_open(5e-4, 2e-3), "**~"},    {Interval::left_open(0.008, 0.012), "*~"},
      {Interval::left_open(0.045, 0.055), "~"}};
  int matched = 0;
  std::string detail;
  for (const auto& [bucket, code] : expected_codes) {
    const std::string got = star_rating(j, bucket).str();
    matched += got == code ? 1 : 0;
    detail += "\"" + got + "\" ";
  }
  return {matched == 7 && j.size() == 7, detail + fmt("(%d/7)", matched)};
}

Outcome lower_bound_check() {
  const BucketSet j = bucket_set_jstar();
  const LowerBoundConfig config{1e-3, 1e-3};
  std::vector<double> grid;
  for (int i = 0; i < 200; ++i) grid.push_back(std::pow(10.0, -4.0 + (4.0 + std::log10(0.999)) * i / 199.0));
  const RlRule rl(j, 1e-3);
  const SimctestTables tables(j, SpendingSequence::standard(5e-4));
  const SimctestRule sim(j, tables);
  const auto rows = effort_curve(grid, rl, sim, config);
  int below_basic = 0;
  int below_effort = 0;
  std::vector<int> strict;
  std::vector<Bucket> overlaps;
  for (const Bucket& b : j.buckets()) {
    if (star_rating(j, b).tilde) overlaps.push_back(b);
  }
  strict.assign(overlaps.size(), 0);
  for (const auto& r : rows) {
    if (r.lower_improved < r.lower_basic) ++below_basic;
    if (r.effort_rl < r.lower_improved || r.effort_simctest < r.lower_improved) ++below_effort;
    for (std::size_t k = 0; k < overlaps.size(); ++k) {
      if (overlaps[k].contains(r.p) && r.lower_improved > r.lower_basic) ++strict[k];
    }
  }
  bool all_strict = !overlaps.empty();
  std::string per;
  for (int s : strict) {
    all_strict = all_strict && s > 0;
    per += fmt("%d ", s);
  }
  return {below_basic == 0 && below_effort == 0 && all_strict,
          fmt("improved<basic at %d pts, effort<improved at %d pts, strict pts per overlap bucket: ", below_basic,
              below_effort) +
              per};
}

std::int64_t lowest_two(const ScreenReport& r) { return r.alt_counts[0] + r.alt_counts[1] + r.null_counts[0] + r.null_counts[1]; }

Outcome screening_check() {
  const BucketSet js = bucket_set_js();
  const BatchSchedule schedule{10, 1.1};
  const std::int64_t n_cap = 100'000'000'000LL;
  ScreenSpec spec;
  spec.hypotheses = 1000;
  spec.alternatives = 10;
  const ScreenReport r = screen(spec, js, 1e-3, schedule, 2013, n_cap);
  int null_low = 0;
  int null_low_wrong = 0;
  int alt_below_floor = 0;
  for (std::size_t i = 0; i < r.true_p.size(); ++i) {
    const Bucket& b = r.buckets[r.decided[i]];
    if (static_cast<std::int64_t>(i) >= spec.alternatives) {
      if (b.hi < 1e-4) {
        ++null_low;
        if (!b.contains(r.true_p[i])) ++null_low_wrong;
      }
    } else if (b.hi < r.naive_floor) {
      ++alt_below_floor;
    }
  }
  // Full scale: the count in the two lowest buckets varies by several units
  // between seeds, so the band is checked on the mean over seeds.
  spec.hypotheses = 10000;
  spec.alternatives = 100;
  const int seeds = 20;
  double sum = 0.0;
  std::int64_t lo = 1 << 30, hi = 0;
  std::int64_t truncated = 0;
  for (int s = 1; s <= seeds; ++s) {
    const ScreenReport full = screen(spec, js, 1e-3, schedule, static_cast<std::uint64_t>(s), n_cap);
    const std::int64_t c = lowest_two(full);
    sum += static_cast<double>(c);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
    truncated += full.truncated;
  }
  const double mean = sum / seeds;
  const bool ok = null_low_wrong == 0 && alt_below_floor > 0 && r.truncated == 0 && mean >= 20 && mean <= 40 &&
                  truncated == 0;
  return {ok, fmt("N=%.0f floor=%.2e, alternatives below floor %d, nulls in hi<1e-4 %d (wrong %d); "
                  "full scale over %d seeds: lowest-two mean %.1f range [%lld,%lld]",
                  r.mean_samples, r.naive_floor, alt_below_floor, null_low, null_low_wrong, seeds, mean,
                  static_cast<long long>(lo), static_cast<long long>(hi))};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"integrated effort on J* within 5%", integrated_effort_check},
      {"boundaries equal 2^n path enumeration (n <= 20)", boundary_oracle_check},
      {"effort DP equals lattice enumeration (horizon <= 25)", dp_oracle_check},
      {"resampling risk on J*, eps = 0.01, 10^4 runs", risk_check},
      {"interval length bound on 10^4 triples", length_bound_check},
      {"J* monotone and closed, J0 not closed", closure_check_all},
      {"star rating codes on J*", rating_check},
      {"lower-bound structure on a 200-point grid", lower_bound_check},
      {"screening at reduced and full scale", screening_check},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), o.detail.c_str(),
                secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
