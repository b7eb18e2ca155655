#include "mcb/stopping_rule.hpp"

#include <algorithm>
#include <cmath>

#include "mcb/confseq_rl.hpp"
#include "mcb/errors.hpp"

namespace mcb {

namespace {

// First x in [lo, hi] with pred(x), or hi + 1; pred is false then true.
// Gallops outward from `guess` before bisecting.
template <class Pred>
std::int64_t first_true(Pred pred, std::int64_t lo, std::int64_t hi, std::int64_t guess) {
  guess = std::clamp(guess, lo, hi);
  std::int64_t a;  // pred(a) false, or a = lo - 1
  std::int64_t b;  // pred(b) true, or b = hi + 1
  if (pred(guess)) {
    b = guess;
    for (std::int64_t step = 1;; step *= 2) {
      const std::int64_t x = b - step;
      if (x < lo) {
        a = lo - 1;
        break;
      }
      if (!pred(x)) {
        a = x;
        break;
      }
      b = x;
    }
  } else {
    a = guess;
    for (std::int64_t step = 1;; step *= 2) {
      const std::int64_t x = a + step;
      if (x > hi) {
        b = hi + 1;
        break;
      }
      if (pred(x)) {
        b = x;
        break;
      }
      a = x;
    }
  }
  while (b - a > 1) {
    const std::int64_t mid = a + (b - a) / 2;
    (pred(mid) ? b : a) = mid;
  }
  return b;
}

// Appends a run, merging with the previous one when contiguous and equal.
void emit(std::vector<Segment>& out, std::int64_t first, std::int64_t last, int target) {
  if (last < first) return;
  if (!out.empty() && out.back().target == target && out.back().last + 1 == first) {
    out.back().last = last;
  } else {
    out.push_back({first, last, target});
  }
}

}  // namespace

RlRule::RlRule(const BucketSet& set, double eps, const BatchSchedule& schedule)
    : set_(set), eps_(eps), checkpoints_(schedule) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidConfig("eps must lie in (0,1)");
  previous_.resize(set_.size());
}

void RlRule::ensure(std::size_t check) const {
  const std::size_t width = set_.size();
  if ((check + 1) * width <= ranges_.size()) return;
  auto guard = ranges_.lock();
  const double log_eps = std::log(eps_);
  while (ranges_.pending() < (check + 1) * width) {
    const std::size_t i = ranges_.pending() / width;
    const std::int64_t n = checkpoints_.n_at(i);
    const double scale = previous_n_ > 0 ? static_cast<double>(n) / static_cast<double>(previous_n_) : 0.0;
    for (std::size_t b = 0; b < width; ++b) {
      const Bucket& bucket = set_[b];
      Range& prev = previous_[b];
      const auto guess_lo = static_cast<std::int64_t>(std::llround(static_cast<double>(prev.lo) * scale));
      const auto guess_hi = static_cast<std::int64_t>(std::llround(static_cast<double>(prev.hi) * scale));
      Range r;
      r.lo = first_true([&](std::int64_t s) { return rl_lower_ok(n, s, log_eps, bucket); }, 0, n,
                        guess_lo);
      r.hi = first_true([&](std::int64_t s) { return !rl_upper_ok(n, s, log_eps, bucket); }, 0, n,
                        guess_hi + 1) -
             1;
      prev = r;
      ranges_.push_back(r);
    }
    previous_n_ = n;
    ranges_.publish();
  }
}

std::pair<std::int64_t, std::int64_t> RlRule::fit_range(std::size_t check,
                                                        std::size_t bucket) const {
  ensure(check);
  const Range& r = ranges_[check * set_.size() + bucket];
  return {r.lo, r.hi};
}

void RlRule::segments(std::size_t check, std::size_t /*mode*/, std::int64_t first,
                      std::int64_t last, std::vector<Segment>& out) const {
  if (last < first) return;
  ensure(check);
  const std::size_t width = set_.size();
  // A check's ranges may straddle two row-store chunks, so copy them out.
  std::vector<Range> rows(width);
  for (std::size_t b = 0; b < width; ++b) rows[b] = ranges_[check * width + b];

  std::vector<std::int64_t> all{first};
  for (std::size_t b = 0; b < width; ++b) {
    if (rows[b].lo > rows[b].hi) continue;
    if (rows[b].lo > first && rows[b].lo <= last) all.push_back(rows[b].lo);
    if (rows[b].hi + 1 > first && rows[b].hi + 1 <= last) all.push_back(rows[b].hi + 1);
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  for (std::size_t k = 0; k < all.size(); ++k) {
    const std::int64_t x = all[k];
    const std::int64_t y = k + 1 < all.size() ? all[k + 1] - 1 : last;
    int target = 0;
    for (std::size_t b : set_.priority()) {
      if (rows[b].lo <= x && x <= rows[b].hi) {
        target = decision_target(b);
        break;
      }
    }
    emit(out, x, y, target);
  }
}

SimctestRule::SimctestRule(const BucketSet& set, const SimctestTables& tables)
    : set_(set), tables_(tables), m_(tables.size()) {
  if (tables.thresholds() != set.boundaries()) {
    throw InvalidConfig("boundary tables do not match the bucket set thresholds");
  }
  for (std::size_t a = 0; a <= m_; ++a) {
    for (std::size_t b = a; b <= m_; ++b) {
      pairs_.emplace_back(a, b);
      const auto fit = set_.select_containing(mode_interval(a, b));
      terminal_.push_back(fit ? decision_target(*fit) : 0);
    }
  }
}

std::size_t SimctestRule::mode_index(std::size_t a, std::size_t b) const {
  // Row a holds pairs (a, a..m); rows before it hold sum_{r<a} (m + 1 - r).
  return a * (m_ + 1) - a * (a - 1) / 2 + (b - a);
}

std::pair<std::size_t, std::size_t> SimctestRule::mode_pair(std::size_t mode) const {
  return pairs_[mode];
}

Interval SimctestRule::mode_interval(std::size_t a, std::size_t b) const {
  const auto& alpha = tables_.thresholds();
  Interval out = Interval::unit();
  if (a > 0) {
    out.lo = alpha[a - 1];
    out.lo_closed = false;
  }
  if (b < m_) out.hi = alpha[b];
  return out;
}

void SimctestRule::segments(std::size_t check, std::size_t mode, std::int64_t first,
                            std::int64_t last, std::vector<Segment>& out) const {
  if (last < first) return;
  const auto [a, b] = pairs_[mode];

  // Breakpoints where a threshold changes status, with the rows' monotonicity.
  std::vector<std::int64_t> cuts{first};
  const BoundaryRow* prev = nullptr;
  for (std::size_t j = a; j < b; ++j) {
    const BoundaryRow& row = tables_[j].row(check);
    if (prev && (prev->lower > row.lower || prev->upper > row.upper)) {
      throw InvalidConfig("boundaries not monotone in the threshold at n = " +
                          std::to_string(row.n));
    }
    prev = &row;
    if (row.upper > first && row.upper <= last) cuts.push_back(row.upper);
    if (row.lower + 1 > first && row.lower + 1 <= last) cuts.push_back(row.lower + 1);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  for (std::size_t k = 0; k < cuts.size(); ++k) {
    const std::int64_t x = cuts[k];
    const std::int64_t y = k + 1 < cuts.size() ? cuts[k + 1] - 1 : last;
    std::size_t a2 = a;
    std::size_t b2 = b;
    while (a2 < b && x >= tables_[a2].row(check).upper) ++a2;
    while (b2 > a2 && x <= tables_[b2 - 1].row(check).lower) --b2;
    const std::size_t next = mode_index(a2, b2);
    emit(out, x, y, terminal_[next] != 0 ? terminal_[next] : static_cast<int>(next));
  }
}

namespace {

struct Span {
  std::int64_t first;
  std::int64_t last;
};

void merge_spans(std::vector<Span>& spans) {
  if (spans.empty()) return;
  std::sort(spans.begin(), spans.end(), [](const Span& x, const Span& y) { return x.first < y.first; });
  std::size_t w = 0;
  for (std::size_t r = 1; r < spans.size(); ++r) {
    if (spans[r].first <= spans[w].last + 1) {
      spans[w].last = std::max(spans[w].last, spans[r].last);
    } else {
      spans[++w] = spans[r];
    }
  }
  spans.resize(w + 1);
}

}  // namespace

std::int64_t closure_check(const StoppingRule& rule, std::int64_t n_max) {
  const Checkpoints& cps = rule.checkpoints();
  const std::size_t modes = rule.mode_count();
  std::vector<std::vector<Span>> alive(modes), next(modes);
  alive[rule.initial_mode()].push_back({0, 0});
  std::vector<Segment> segs;
  for (std::size_t i = 0;; ++i) {
    const std::int64_t n = cps.n_at(i);
    if (n > n_max) throw NotClosed(n_max);
    const std::int64_t delta = cps.batch(i);
    for (auto& v : next) v.clear();
    bool any = false;
    for (std::size_t m = 0; m < modes; ++m) {
      for (const Span& span : alive[m]) {
        segs.clear();
        rule.segments(i, m, span.first, span.last + delta, segs);
        for (const Segment& seg : segs) {
          if (seg.target >= 0) {
            next[static_cast<std::size_t>(seg.target)].push_back({seg.first, seg.last});
            any = true;
          }
        }
      }
    }
    if (!any) return n;
    for (auto& v : next) merge_spans(v);
    std::swap(alive, next);
  }
}

std::int64_t closure_time(const BucketSet& set, const SimctestTables& tables, std::int64_t n_max) {
  const SimctestRule rule(set, tables);
  return closure_check(rule, n_max);
}

std::int64_t rl_stopping_bound(const BucketSet& set, double eps) {
  const double c = containment_constant(set);
  if (!(c > 0.0)) throw NotClosed(0);
  // rl_length_bound is decreasing in n.
  std::int64_t hi = 1;
  while (!(rl_length_bound(hi, eps) < c)) {
    if (hi > (std::int64_t{1} << 52)) throw NotClosed(hi);
    hi *= 2;
  }
  std::int64_t lo = hi / 2;
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (rl_length_bound(mid, eps) < c ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace mcb
