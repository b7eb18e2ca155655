#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcb/buckets.hpp"
#include "mcb/numeric.hpp"
#include "mcb/row_store.hpp"
#include "mcb/schedule.hpp"

namespace mcb {

/// Error spending sequence eps_n: rho * n / (n + k) by default, or a custom
/// non-decreasing table (eps_1, eps_2, ...) held constant after its end.
struct SpendingSequence {
  double rho = 5e-4;
  double k = 1000.0;
  std::vector<double> custom;

  static SpendingSequence standard(double rho, double k = 1000.0) { return {rho, k, {}}; }
};

double spending_eval(const SpendingSequence& spending, std::int64_t n);

/// One check of a Simctest boundary: stop below if S_n <= lower, above if S_n >= upper.
/// Spent masses are cumulative through this check.
struct BoundaryRow {
  std::int64_t n = 0;
  std::int64_t lower = -1;
  std::int64_t upper = 1;
  double spent_lower = 0.0;
  double spent_upper = 0.0;
};

/// Stopping boundaries (L_n, U_n) for one threshold.
///
/// Rows are produced by a forward pass over the sub-probability vector
/// P_alpha(tau >= n, S_n = s), kept on the window (L_n, U_n). A table built by
/// `build_boundaries` holds rows up to n_max; a table made with `lazy` grows on
/// demand, and `row()` may be called from several threads.
class BoundaryTable {
 public:
  static std::unique_ptr<BoundaryTable> lazy(double alpha, const SpendingSequence& spending,
                                             const BatchSchedule& schedule = {},
                                             std::int64_t n_limit = 100'000'000);

  /// A frozen table from explicit rows (import, tests).
  static std::unique_ptr<BoundaryTable> from_rows(double alpha, const SpendingSequence& spending,
                                                  const BatchSchedule& schedule,
                                                  const std::vector<BoundaryRow>& rows);

  double alpha() const { return alpha_; }
  double rho() const { return spending_.rho; }
  const SpendingSequence& spending() const { return spending_; }
  const Checkpoints& checkpoints() const { return checkpoints_; }

  /// Rows available without further computation.
  std::size_t size() const { return rows_.size(); }

  /// Row at check index i, computing it first if the table is lazy.
  /// Throws NMaxTooSmall beyond the table's limit.
  const BoundaryRow& row(std::size_t i) const;

  /// Computes rows up to and including check index i.
  void ensure(std::size_t i) const;

  double eps(std::size_t i) const { return spending_eval(spending_, checkpoints_.n_at(i)); }

 private:
  BoundaryTable(double alpha, const SpendingSequence& spending, const BatchSchedule& schedule,
                std::int64_t n_limit);
  void extend_locked(std::size_t target) const;

  double alpha_;
  SpendingSequence spending_;
  Checkpoints checkpoints_;
  std::int64_t n_limit_;
  bool frozen_ = false;

  mutable RowStore<BoundaryRow> rows_;
  // Forward-pass state, guarded by the row store lock.
  mutable std::int64_t window_first_ = 0;
  mutable std::vector<double> window_{1.0};
  mutable std::vector<double> scratch_;
  mutable CompensatedSum spent_lower_;
  mutable CompensatedSum spent_upper_;
};

/// Table holding every check with n <= n_max.
std::unique_ptr<BoundaryTable> build_boundaries(double alpha, const SpendingSequence& spending,
                                                std::int64_t n_max,
                                                const BatchSchedule& schedule = {});

/// True iff L and U are non-decreasing in alpha across adjacent tables for all
/// checks with n < N. Throws NMaxTooSmall if a table does not reach N - 1.
bool check_monotone(std::span<const BoundaryTable* const> tables, std::int64_t N);

/// Smallest n0 with 2 (Delta_n / n + 1/n) <= alpha' - alpha for n >= n0, where
/// Delta_n = sqrt(-n log(eps_n - eps_{n-1}) / 2). Throws NotFound above 1e8.
std::int64_t compute_n0(double alpha, double alpha_prime, const SpendingSequence& spending);

enum class ThresholdStatus { undecided, below, above };

struct ThresholdHit {
  double alpha = 0.0;
  ThresholdStatus status = ThresholdStatus::undecided;
  std::int64_t n = 0;
};

/// Joint state over all thresholds of a bucket set.
struct SimctestState {
  std::int64_t n = 0;
  std::int64_t successes = 0;
  std::vector<ThresholdHit> hits;  // one per threshold, sorted by alpha
};

/// Intersection of the per-threshold intervals: (largest alpha decided above,
/// smallest alpha decided below]. Throws InconsistentDecisions when the
/// statuses are not ordered.
Interval simctest_interval(const SimctestState& state);

/// Boundary tables for every interior endpoint of a bucket set, sharing one
/// spending sequence and check schedule.
class SimctestTables {
 public:
  SimctestTables(const BucketSet& set, const SpendingSequence& spending,
                 const BatchSchedule& schedule = {}, std::int64_t n_limit = 100'000'000);

  const std::vector<double>& thresholds() const { return thresholds_; }
  std::size_t size() const { return tables_.size(); }
  const BoundaryTable& operator[](std::size_t i) const { return *tables_[i]; }
  std::vector<const BoundaryTable*> pointers() const;
  const SpendingSequence& spending() const { return spending_; }
  const Checkpoints& checkpoints() const { return checkpoints_; }

  /// Computes all tables through check index i, one thread per table.
  void ensure(std::size_t i) const;

 private:
  std::vector<double> thresholds_;
  SpendingSequence spending_;
  Checkpoints checkpoints_;
  std::vector<std::unique_ptr<BoundaryTable>> tables_;
};

/// Smallest n at which no (n, S_n) state reachable without stopping remains.
/// Throws NotClosed(n_max) if states survive to n_max.
std::int64_t closure_time(const BucketSet& set, const SimctestTables& tables, std::int64_t n_max);

/// CSV with columns n,L_n,U_n,eps_n,spent_lower,spent_upper.
void write_boundary_csv(std::ostream& out, const BoundaryTable& table, std::size_t rows);
std::unique_ptr<BoundaryTable> read_boundary_csv(std::istream& in, double alpha,
                                                 const SpendingSequence& spending,
                                                 const BatchSchedule& schedule = {});

}  // namespace mcb
