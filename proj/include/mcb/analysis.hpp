#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mcb/buckets.hpp"
#include "mcb/lattice_dp.hpp"
#include "mcb/stopping_rule.hpp"

namespace mcb {

// ---- Wald-type lower bounds ------------------------------------------------

/// Lower bound on E_{p0}[N] for a sequential test of p = p0 against p = p1
/// with error rates type1, type2: [(1-a) log((1-a)/b) + a log(a/(1-b))] / KL(p0 || p1).
/// type1 may be 0 (its limit); the bound is 0 when type1 + type2 >= 1.
/// Throws DegenerateAlternative if p0 == p1.
double wald_bound(double p0, double p1, double type1, double type2);

/// max over boundary points q of the union of buckets containing p of wald_bound(p, q, eps, eps).
double lower_bound_basic(double p, const BucketSet& set, double eps);

struct LowerBoundConfig {
  double eps = 1e-3;
  double delta = 1e-3;  // eta grid width
};

/// Basic bound, raised by the eta-minimax bound when p lies in exactly two buckets.
double lower_bound_improved(double p, const BucketSet& set, const LowerBoundConfig& config);

// ---- densities and quadrature ----------------------------------------------

struct DensitySpec {
  enum class Kind { uniform, piecewise_mix, beta };
  Kind kind = Kind::uniform;
  std::string name = "H0";
  // piecewise_mix: base + bump * 1(x <= cut)
  double base = 0.5;
  double bump = 10.0;
  double cut = 0.05;
  // beta
  double a = 0.5;
  double b = 25.0;

  double operator()(double x) const;
  /// Interior points where the density is not smooth.
  std::vector<double> breakpoints() const;

  static DensitySpec h0();
  static DensitySpec h1a();
  static DensitySpec h1b();
};

/// f(p) memoised across calls; missing points are evaluated in parallel.
class CachedFunction {
 public:
  explicit CachedFunction(std::function<double(double)> f, bool parallel = true)
      : f_(std::move(f)), parallel_(parallel) {}

  std::vector<double> evaluate(const std::vector<double>& points);
  std::size_t evaluations() const { return cache_.size(); }

 private:
  std::function<double(double)> f_;
  bool parallel_;
  std::map<double, double> cache_;
};

struct QuadOptions {
  double rel_tol = 1e-3;
  std::size_t max_intervals = 2000;
  /// Intervals bisected per round; fixed so results do not depend on thread count.
  std::size_t batch = 8;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
};

/// Integral of f(p) * density(p) over [0,1] by adaptive Gauss-Kronrod (7,15),
/// starting from panels split at the bucket and density breakpoints. The panel
/// touching 0 uses p = u^2. Throws QuadratureNotConverged if the error estimate
/// exceeds 1% of the value.
QuadratureResult integrate_density(const DensitySpec& density, const BucketSet& set,
                                   CachedFunction& f, const QuadOptions& options = {});

/// DP settings for integrated effort: edge cells below 1e-20 are dropped.
DpOptions default_dp();

/// Integral of effort_and_probs(p).expected_effort against the density.
QuadratureResult integrated_effort(const DensitySpec& density, const StoppingRule& rule,
                                   const QuadOptions& options = {}, const DpOptions& dp = default_dp());

QuadratureResult integrated_lower_bound(const DensitySpec& density, const BucketSet& set,
                                        const LowerBoundConfig& config,
                                        const QuadOptions& options = {});

/// Rows H0, H1a, H1b; columns Robbins-Lai, Simctest, lower bound; J* with rho = eps / 2.
struct Table2 {
  std::array<std::array<double, 3>, 3> value{};
  std::array<std::array<double, 3>, 3> error{};
};

Table2 table2(double eps, double spending_k = 1000.0, const QuadOptions& options = {});
void write_table2_csv(std::ostream& out, const Table2& table);

// ---- curves -------------------------------------------------------------------

/// n interior grid points (i + 0.5) / n.
std::vector<double> uniform_grid(std::size_t n);

struct EffortCurveRow {
  double p = 0.0;
  double effort_rl = 0.0;
  double effort_simctest = 0.0;
  double lower_basic = 0.0;
  double lower_improved = 0.0;
};

std::vector<EffortCurveRow> effort_curve(const std::vector<double>& grid, const RlRule& rl,
                                         const SimctestRule& sim, const LowerBoundConfig& config,
                                         bool parallel = true);
void write_effort_csv(std::ostream& out, const std::vector<EffortCurveRow>& rows);

/// Decision probabilities per rating code ("***", "**~", ...) at each grid point.
struct ProbCurve {
  std::vector<std::string> codes;
  std::vector<double> p;
  std::vector<std::vector<double>> probs;  // [point][code]
};

ProbCurve decision_curve(const std::vector<double>& grid, const StoppingRule& rule, bool parallel = true);
void write_prob_csv(std::ostream& out, const ProbCurve& curve);

// ---- screening -----------------------------------------------------------------

struct ScreenSpec {
  std::int64_t hypotheses = 10'000;
  std::int64_t alternatives = 100;
  double df = 100.0;
  double ncp_lo = 2.0;
  double ncp_hi = 6.0;
};

struct ScreenReport {
  std::vector<Bucket> buckets;            // the set, in index order
  std::vector<std::int64_t> null_counts;  // per bucket
  std::vector<std::int64_t> alt_counts;
  std::vector<double> true_p;
  std::vector<std::size_t> decided;  // bucket index per hypothesis
  std::vector<std::int64_t> samples;
  std::int64_t total_samples = 0;
  std::int64_t truncated = 0;
  double mean_samples = 0.0;  // N
  double naive_floor = 0.0;   // 1 / N
};

/// True p-values: alternatives first (1 - F_df(X), X noncentral t with ncp
/// uniform in [ncp_lo, ncp_hi]), then uniform nulls. Each hypothesis draws from
/// its own counter stream.
std::vector<double> screen_p_values(const ScreenSpec& spec, std::uint64_t seed);

ScreenReport screen(const ScreenSpec& spec, const BucketSet& set, double eps,
                    const BatchSchedule& schedule, std::uint64_t seed, std::int64_t n_cap = 10'000'000'000LL,
                    bool parallel = true);

void write_screen_csv(std::ostream& out, const ScreenReport& report);
std::string screen_summary_json(const ScreenReport& report);

}  // namespace mcb
