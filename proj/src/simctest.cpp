#include "mcb/simctest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "mcb/binomial.hpp"
#include "mcb/errors.hpp"

namespace mcb {

double spending_eval(const SpendingSequence& spending, std::int64_t n) {
  if (n <= 0) return 0.0;
  if (!spending.custom.empty()) {
    const auto size = static_cast<std::int64_t>(spending.custom.size());
    return spending.custom[static_cast<std::size_t>(std::min(n, size) - 1)];
  }
  const double nd = static_cast<double>(n);
  return spending.rho * nd / (nd + spending.k);
}

namespace {

void check_spending(const SpendingSequence& spending) {
  if (spending.custom.empty()) {
    if (!(spending.rho > 0.0 && spending.rho < 1.0)) throw InvalidConfig("rho must lie in (0,1)");
    if (!(spending.k >= 0.0)) throw InvalidConfig("spending k must be non-negative");
    return;
  }
  double prev = 0.0;
  for (double e : spending.custom) {
    if (!(e >= prev && e < 1.0)) throw InvalidConfig("custom spending must be non-decreasing in [0,1)");
    prev = e;
  }
}

}  // namespace

BoundaryTable::BoundaryTable(double alpha, const SpendingSequence& spending,
                             const BatchSchedule& schedule, std::int64_t n_limit)
    : alpha_(alpha), spending_(spending), checkpoints_(schedule), n_limit_(n_limit) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidConfig("threshold must lie in (0,1)");
  check_spending(spending);
}

std::unique_ptr<BoundaryTable> BoundaryTable::lazy(double alpha, const SpendingSequence& spending,
                                                   const BatchSchedule& schedule,
                                                   std::int64_t n_limit) {
  return std::unique_ptr<BoundaryTable>(new BoundaryTable(alpha, spending, schedule, n_limit));
}

std::unique_ptr<BoundaryTable> BoundaryTable::from_rows(double alpha,
                                                        const SpendingSequence& spending,
                                                        const BatchSchedule& schedule,
                                                        const std::vector<BoundaryRow>& rows) {
  auto table = std::unique_ptr<BoundaryTable>(new BoundaryTable(alpha, spending, schedule, 0));
  table->frozen_ = true;
  auto guard = table->rows_.lock();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].n != table->checkpoints_.n_at(i)) {
      throw InvalidConfig("boundary row " + std::to_string(i) + " has n = " +
                          std::to_string(rows[i].n) + ", schedule expects " +
                          std::to_string(table->checkpoints_.n_at(i)));
    }
    table->rows_.push_back(rows[i]);
  }
  table->rows_.publish();
  return table;
}

const BoundaryRow& BoundaryTable::row(std::size_t i) const {
  if (i >= rows_.size()) ensure(i);
  return rows_[i];
}

void BoundaryTable::ensure(std::size_t i) const {
  if (i < rows_.size()) return;
  if (frozen_) {
    throw NMaxTooSmall("boundary table for alpha = " + std::to_string(alpha_) + " ends at n = " +
                       (rows_.size() ? std::to_string(rows_[rows_.size() - 1].n) : "0"));
  }
  if (checkpoints_.n_at(i) > n_limit_) {
    throw NMaxTooSmall("boundary table for alpha = " + std::to_string(alpha_) +
                       " limited to n = " + std::to_string(n_limit_));
  }
  auto guard = rows_.lock();
  extend_locked(i);
}

void BoundaryTable::extend_locked(std::size_t target) const {
  const double q = 1.0 - alpha_;
  while (rows_.pending() <= target) {
    const std::size_t i = rows_.pending();
    const std::int64_t n = checkpoints_.n_at(i);
    const std::int64_t delta = checkpoints_.batch(i);

    // Advance the alive window by `delta` Bernoulli(alpha) steps.
    std::int64_t first = window_first_;
    if (delta == 1) {
      scratch_.assign(window_.size() + 1, 0.0);
      for (std::size_t s = 0; s < window_.size(); ++s) {
        scratch_[s] += window_[s] * q;
        scratch_[s + 1] += window_[s] * alpha_;
      }
    } else {
      const PmfWindow pmf = binomial_pmf_window(delta, alpha_);
      first += pmf.first;
      scratch_.assign(window_.size() + pmf.probs.size() - 1, 0.0);
      for (std::size_t s = 0; s < window_.size(); ++s) {
        const double w = window_[s];
        if (w == 0.0) continue;
        double* out = scratch_.data() + s;
        for (std::size_t k = 0; k < pmf.probs.size(); ++k) out[k] += w * pmf.probs[k];
      }
    }
    std::swap(window_, scratch_);
    const std::int64_t last = first + static_cast<std::int64_t>(window_.size()) - 1;
    auto at = [&](std::int64_t s) { return window_[static_cast<std::size_t>(s - first)]; };

    BoundaryRow row;
    row.n = n;
    double hit_upper = 0.0;
    double hit_lower = 0.0;
    if (i == 0 && n == 1) {
      row.lower = -1;
      row.upper = 2;
    } else {
      const double eps = spending_eval(spending_, n);
      const double up_spent = spent_upper_.value();
      const double lo_spent = spent_lower_.value();
      std::int64_t u = last + 1;
      double tail = 0.0;
      while (u - 1 >= first && tail + at(u - 1) + up_spent <= eps) {
        tail += at(u - 1);
        --u;
      }
      std::int64_t l = first - 1;
      double low = 0.0;
      while (l + 1 <= last && low + at(l + 1) + lo_spent <= eps) {
        low += at(l + 1);
        ++l;
      }
      // Only possible when the alive mass is below 2 eps_n.
      if (l >= u) {
        l = u - 1;
        low = 0.0;
        for (std::int64_t s = first; s <= l; ++s) low += at(s);
      }
      row.lower = l;
      row.upper = u;
      hit_upper = tail;
      hit_lower = low;
    }
    spent_upper_.add(hit_upper);
    spent_lower_.add(hit_lower);
    row.spent_upper = spent_upper_.value();
    row.spent_lower = spent_lower_.value();

    // Keep only the alive states (L, U).
    const std::int64_t keep_first = std::max(first, row.lower + 1);
    const std::int64_t keep_last = std::min(last, row.upper - 1);
    if (keep_last < keep_first) {
      window_.assign(1, 0.0);
      window_first_ = keep_first;
    } else {
      window_.erase(window_.begin() + (keep_last - first + 1), window_.end());
      window_.erase(window_.begin(), window_.begin() + (keep_first - first));
      window_first_ = keep_first;
    }

    rows_.push_back(row);
    rows_.publish();
  }
}

std::unique_ptr<BoundaryTable> build_boundaries(double alpha, const SpendingSequence& spending,
                                                std::int64_t n_max,
                                                const BatchSchedule& schedule) {
  if (n_max < 1) throw InvalidConfig("n_max must be at least 1");
  auto table = BoundaryTable::lazy(alpha, spending, schedule, n_max);
  const std::int64_t last = table->checkpoints().last_index_within(n_max);
  if (last < 0) throw NMaxTooSmall("n_max is below the first checkpoint");
  table->ensure(static_cast<std::size_t>(last));
  return table;
}

bool check_monotone(std::span<const BoundaryTable* const> tables, std::int64_t N) {
  if (tables.size() < 2) return true;
  const Checkpoints& cps = tables.front()->checkpoints();
  const std::int64_t last = cps.last_index_within(N - 1);
  for (std::size_t t = 0; t + 1 < tables.size(); ++t) {
    const BoundaryTable& a = *tables[t];
    const BoundaryTable& b = *tables[t + 1];
    if (!(a.alpha() < b.alpha())) throw InvalidConfig("tables must be sorted by threshold");
    if (!(a.checkpoints().schedule() == b.checkpoints().schedule())) {
      throw InvalidConfig("tables must share one check schedule");
    }
    for (std::int64_t i = 0; i <= last; ++i) {
      const BoundaryRow& ra = a.row(static_cast<std::size_t>(i));
      const BoundaryRow& rb = b.row(static_cast<std::size_t>(i));
      if (ra.lower > rb.lower || ra.upper > rb.upper) return false;
    }
  }
  return true;
}

namespace {

bool n0_condition(std::int64_t n, double gap, const SpendingSequence& spending) {
  double diff = spending_eval(spending, n) - spending_eval(spending, n - 1);
  if (spending.custom.empty()) {
    // Closed form avoids cancellation: rho k / ((n+k)(n+k-1)).
    const double nd = static_cast<double>(n);
    diff = spending.rho * spending.k / ((nd + spending.k) * (nd - 1.0 + spending.k));
  }
  if (!(diff > 0.0)) return false;
  const double nd = static_cast<double>(n);
  const double delta = std::sqrt(-nd * std::log(diff) / 2.0);
  return 2.0 * (delta / nd + 1.0 / nd) <= gap;
}

}  // namespace

std::int64_t compute_n0(double alpha, double alpha_prime, const SpendingSequence& spending) {
  if (!(alpha < alpha_prime)) throw InvalidConfig("compute_n0 needs alpha < alpha_prime");
  check_spending(spending);
  constexpr std::int64_t kMax = 100'000'000;
  const double gap = alpha_prime - alpha;

  std::int64_t start = 2;
  while (start <= kMax) {
    // First n >= start meeting the condition: doubling then bisection.
    std::int64_t hi = start;
    while (hi <= kMax && !n0_condition(hi, gap, spending)) hi *= 2;
    if (hi > kMax) {
      hi = kMax;
      if (!n0_condition(hi, gap, spending)) break;
    }
    std::int64_t lo = std::max(start, hi / 2);
    if (n0_condition(lo, gap, spending)) hi = lo, lo = lo - 1;
    while (hi - lo > 1) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      (n0_condition(mid, gap, spending) ? hi : lo) = mid;
    }
    const std::int64_t n0 = std::max(start, hi);
    // Verify on [n0, 10 n0], exhaustively when cheap, else on a fine grid.
    const std::int64_t end = std::min<std::int64_t>(10 * n0, 10 * kMax);
    const std::int64_t stride = std::max<std::int64_t>(1, (end - n0) / 1'000'000);
    std::int64_t bad = -1;
    for (std::int64_t n = n0; n <= end; n += stride) {
      if (!n0_condition(n, gap, spending)) {
        bad = n;
        break;
      }
    }
    if (bad < 0) return n0;
    start = bad + 1;
  }
  throw NotFound("no n0 below 1e8 for thresholds " + std::to_string(alpha) + " and " +
                 std::to_string(alpha_prime));
}

Interval simctest_interval(const SimctestState& state) {
  Interval out = Interval::unit();
  bool has_above = false;
  bool has_below = false;
  for (const ThresholdHit& hit : state.hits) {
    if (hit.status == ThresholdStatus::above && (!has_above || hit.alpha > out.lo)) {
      out.lo = hit.alpha;
      has_above = true;
    } else if (hit.status == ThresholdStatus::below && (!has_below || hit.alpha < out.hi)) {
      out.hi = hit.alpha;
      has_below = true;
    }
  }
  if (has_above && has_below && !(out.lo < out.hi)) {
    throw InconsistentDecisions("threshold " + std::to_string(out.hi) + " decided below while " +
                                std::to_string(out.lo) + " decided above");
  }
  out.lo_closed = !has_above;
  out.hi_closed = true;
  return out;
}

SimctestTables::SimctestTables(const BucketSet& set, const SpendingSequence& spending,
                               const BatchSchedule& schedule, std::int64_t n_limit)
    : thresholds_(set.boundaries()), spending_(spending), checkpoints_(schedule) {
  tables_.reserve(thresholds_.size());
  for (double alpha : thresholds_) {
    tables_.push_back(BoundaryTable::lazy(alpha, spending, schedule, n_limit));
  }
}

std::vector<const BoundaryTable*> SimctestTables::pointers() const {
  std::vector<const BoundaryTable*> out;
  out.reserve(tables_.size());
  for (const auto& t : tables_) out.push_back(t.get());
  return out;
}

void SimctestTables::ensure(std::size_t i) const {
  const auto count = static_cast<std::int64_t>(tables_.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t t = 0; t < count; ++t) tables_[static_cast<std::size_t>(t)]->ensure(i);
}

void write_boundary_csv(std::ostream& out, const BoundaryTable& table, std::size_t rows) {
  out << "n,L_n,U_n,eps_n,spent_lower,spent_upper\n";
  char buf[160];
  for (std::size_t i = 0; i < rows; ++i) {
    const BoundaryRow& r = table.row(i);
    std::snprintf(buf, sizeof buf, "%lld,%lld,%lld,%.17g,%.17g,%.17g\n",
                  static_cast<long long>(r.n), static_cast<long long>(r.lower),
                  static_cast<long long>(r.upper), table.eps(i), r.spent_lower, r.spent_upper);
    out << buf;
  }
}

std::unique_ptr<BoundaryTable> read_boundary_csv(std::istream& in, double alpha,
                                                 const SpendingSequence& spending,
                                                 const BatchSchedule& schedule) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("n,L_n,U_n", 0) != 0) {
    throw InvalidConfig("boundary CSV lacks the n,L_n,U_n,... header");
  }
  std::vector<BoundaryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    BoundaryRow r;
    double eps = 0.0;
    char c1, c2, c3, c4, c5;
    if (!(fields >> r.n >> c1 >> r.lower >> c2 >> r.upper >> c3 >> eps >> c4 >> r.spent_lower >>
          c5 >> r.spent_upper) ||
        c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',' || c5 != ',') {
      throw InvalidConfig("malformed boundary CSV line: " + line);
    }
    rows.push_back(r);
  }
  return BoundaryTable::from_rows(alpha, spending, schedule, rows);
}

}  // namespace mcb
