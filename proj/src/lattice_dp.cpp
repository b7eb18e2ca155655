#include "mcb/lattice_dp.hpp"

#include <algorithm>

#include "mcb/binomial.hpp"
#include "mcb/errors.hpp"
#include "mcb/numeric.hpp"

namespace mcb {

namespace {

struct Window {
  std::int64_t first = 0;
  std::vector<double> v;

  bool empty() const { return v.empty(); }
  std::int64_t last() const { return first + static_cast<std::int64_t>(v.size()) - 1; }

  void add(std::int64_t from, const double* x, std::size_t len) {
    if (len == 0) return;
    const std::int64_t to = from + static_cast<std::int64_t>(len) - 1;
    if (v.empty()) {
      first = from;
      v.assign(x, x + len);
      return;
    }
    if (from < first) {
      v.insert(v.begin(), static_cast<std::size_t>(first - from), 0.0);
      first = from;
    }
    if (to > last()) v.resize(static_cast<std::size_t>(to - first + 1), 0.0);
    double* out = v.data() + (from - first);
    for (std::size_t k = 0; k < len; ++k) out[k] += x[k];
  }
};

// Advances `in` by one batch of Bernoulli(p) draws into `out`.
void advance(const Window& in, std::int64_t delta, double p, const PmfWindow* pmf, Window& out) {
  if (delta == 1 && pmf == nullptr) {
    const double q = 1.0 - p;
    out.first = in.first;
    out.v.assign(in.v.size() + 1, 0.0);
    for (std::size_t s = 0; s < in.v.size(); ++s) {
      out.v[s] += in.v[s] * q;
      out.v[s + 1] += in.v[s] * p;
    }
    return;
  }
  out.first = in.first + pmf->first;
  out.v.assign(in.v.size() + pmf->probs.size() - 1, 0.0);
  for (std::size_t s = 0; s < in.v.size(); ++s) {
    const double w = in.v[s];
    if (w == 0.0) continue;
    double* o = out.v.data() + s;
    for (std::size_t k = 0; k < pmf->probs.size(); ++k) o[k] += w * pmf->probs[k];
  }
}

}  // namespace

EffortResult effort_and_probs(double p, const StoppingRule& rule, const DpOptions& options) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidConfig("p must lie in [0,1]");
  if (options.horizon < 1) throw InvalidConfig("horizon must be at least 1");
  const Checkpoints& cps = rule.checkpoints();
  const std::size_t modes = rule.mode_count();
  const std::size_t buckets = rule.set().size();

  std::vector<Window> alive(modes), next(modes);
  alive[rule.initial_mode()] = {0, {1.0}};
  std::vector<CompensatedSum> decided(buckets);
  CompensatedSum effort, dropped;
  Window stepped;
  std::vector<Segment> segs;
  PmfWindow pmf;
  std::int64_t pmf_delta = -1;

  EffortResult result;
  double alive_mass = 1.0;
  for (std::size_t i = 0;; ++i) {
    const std::int64_t n = cps.n_at(i);
    if (n > options.horizon || alive_mass <= options.stop_mass) break;
    const std::int64_t delta = cps.batch(i);
    const bool fast = delta == 1 && p > 0.0 && p < 1.0;
    if (!fast && delta != pmf_delta) {
      pmf = binomial_pmf_window(delta, p);
      pmf_delta = delta;
    }
    for (auto& w : next) w.v.clear();
    const auto nd = static_cast<double>(n);
    alive_mass = 0.0;

    for (std::size_t m = 0; m < modes; ++m) {
      if (alive[m].empty()) continue;
      advance(alive[m], delta, p, fast ? nullptr : &pmf, stepped);
      // Trim negligible edges.
      std::size_t lo = 0;
      std::size_t hi = stepped.v.size();
      if (options.trim > 0.0) {
        while (lo < hi && stepped.v[lo] < options.trim) dropped.add(stepped.v[lo++]);
        while (hi > lo && stepped.v[hi - 1] < options.trim) dropped.add(stepped.v[--hi]);
      }
      if (lo == hi) continue;
      const std::int64_t first = stepped.first + static_cast<std::int64_t>(lo);
      const std::int64_t last = stepped.first + static_cast<std::int64_t>(hi) - 1;
      segs.clear();
      rule.segments(i, m, first, last, segs);
      for (const Segment& seg : segs) {
        const double* x = stepped.v.data() + (seg.first - stepped.first);
        const auto len = static_cast<std::size_t>(seg.last - seg.first + 1);
        if (seg.target >= 0) {
          next[static_cast<std::size_t>(seg.target)].add(seg.first, x, len);
        } else {
          CompensatedSum mass;
          for (std::size_t k = 0; k < len; ++k) mass.add(x[k]);
          decided[decided_bucket(seg.target)].add(mass.value());
          effort.add(nd * mass.value());
        }
      }
    }
    std::swap(alive, next);
    for (const Window& w : alive) {
      for (double x : w.v) alive_mass += x;
    }
    result.horizon = n;
  }

  result.residual_mass = alive_mass;
  result.truncated = alive_mass > 0.0;
  effort.add(static_cast<double>(result.horizon) * alive_mass);
  result.expected_effort = effort.value();
  result.dropped_mass = dropped.value();
  result.decision_probs.resize(buckets);
  for (std::size_t b = 0; b < buckets; ++b) result.decision_probs[b] = decided[b].value();
  return result;
}

}  // namespace mcb
