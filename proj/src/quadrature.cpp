#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "mcb/analysis.hpp"
#include "mcb/errors.hpp"
#include "mcb/parallel.hpp"
#include "mcb/special_functions.hpp"

namespace mcb {

double DensitySpec::operator()(double x) const {
  if (x < 0.0 || x > 1.0) return 0.0;
  switch (kind) {
    case Kind::uniform: return 1.0;
    case Kind::piecewise_mix: return base + (x <= cut ? bump : 0.0);
    case Kind::beta:
      if (x <= 0.0 || x >= 1.0) return 0.0;
      return std::exp(log_beta_density(x, a, b));
  }
  return 0.0;
}

std::vector<double> DensitySpec::breakpoints() const {
  if (kind == Kind::piecewise_mix && cut > 0.0 && cut < 1.0) return {cut};
  return {};
}

DensitySpec DensitySpec::h0() { return {}; }

DensitySpec DensitySpec::h1a() {
  DensitySpec d;
  d.kind = Kind::piecewise_mix;
  d.name = "H1a";
  return d;
}

DensitySpec DensitySpec::h1b() {
  DensitySpec d;
  d.kind = Kind::beta;
  d.name = "H1b";
  return d;
}

std::vector<double> CachedFunction::evaluate(const std::vector<double>& points) {
  std::vector<double> missing;
  for (double x : points) {
    if (!cache_.count(x)) missing.push_back(x);
  }
  std::sort(missing.begin(), missing.end());
  missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
  std::vector<double> values(missing.size());
  parallel_for(missing.size(), [&](std::size_t i) { values[i] = f_(missing[i]); }, parallel_);
  for (std::size_t i = 0; i < missing.size(); ++i) cache_.emplace(missing[i], values[i]);
  std::vector<double> out;
  out.reserve(points.size());
  for (double x : points) out.push_back(cache_.at(x));
  return out;
}

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kXgk[1], [3], [5], [7].
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double lo = 0.0;
  double hi = 0.0;
  bool squared = false;  // variable u with p = u^2
  double value = 0.0;
  double error = 0.0;
};

std::vector<double> nodes(const Piece& piece) {
  const double mid = 0.5 * (piece.lo + piece.hi);
  const double half = 0.5 * (piece.hi - piece.lo);
  std::vector<double> t;
  t.reserve(15);
  for (int k = 0; k < 7; ++k) {
    t.push_back(mid - half * kXgk[k]);
    t.push_back(mid + half * kXgk[k]);
  }
  t.push_back(mid);
  if (piece.squared) {
    for (double& u : t) u *= u;
  }
  return t;
}

void apply_rule(Piece& piece, const std::vector<double>& p, const std::vector<double>& f,
                const DensitySpec& density) {
  const double mid = 0.5 * (piece.lo + piece.hi);
  const double half = 0.5 * (piece.hi - piece.lo);
  auto g = [&](std::size_t i, double t) {
    const double jac = piece.squared ? 2.0 * t : 1.0;
    return f[i] * density(p[i]) * jac;
  };
  double kron = 0.0;
  double gauss = 0.0;
  for (int k = 0; k < 7; ++k) {
    const double x = half * kXgk[k];
    const double sum = g(2 * k, mid - x) + g(2 * k + 1, mid + x);
    kron += kWgk[k] * sum;
    if (k % 2 == 1) gauss += kWg[k / 2] * sum;
  }
  const double centre = g(14, mid);
  kron += kWgk[7] * centre;
  gauss += kWg[3] * centre;
  piece.value = kron * half;
  piece.error = std::fabs((kron - gauss) * half);
}

void evaluate(std::vector<Piece>& pieces, CachedFunction& f, const DensitySpec& density) {
  std::vector<double> all;
  for (const Piece& piece : pieces) {
    const auto t = nodes(piece);
    all.insert(all.end(), t.begin(), t.end());
  }
  const std::vector<double> values = f.evaluate(all);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const std::vector<double> p(all.begin() + static_cast<std::ptrdiff_t>(15 * i),
                                all.begin() + static_cast<std::ptrdiff_t>(15 * i + 15));
    const std::vector<double> v(values.begin() + static_cast<std::ptrdiff_t>(15 * i),
                                values.begin() + static_cast<std::ptrdiff_t>(15 * i + 15));
    apply_rule(pieces[i], p, v, density);
  }
}

}  // namespace

QuadratureResult integrate_density(const DensitySpec& density, const BucketSet& set, CachedFunction& f,
                                   const QuadOptions& options) {
  std::set<double> cuts{0.0, 1.0};
  for (double x : set.boundaries()) cuts.insert(x);
  for (double x : density.breakpoints()) cuts.insert(x);
  const std::vector<double> edges(cuts.begin(), cuts.end());

  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Piece piece;
    piece.squared = edges[i] == 0.0;
    piece.lo = piece.squared ? 0.0 : edges[i];
    piece.hi = piece.squared ? std::sqrt(edges[i + 1]) : edges[i + 1];
    pieces.push_back(piece);
  }
  evaluate(pieces, f, density);

  auto totals = [&] {
    double v = 0.0;
    double e = 0.0;
    for (const Piece& piece : pieces) {
      v += piece.value;
      e += piece.error;
    }
    return std::pair{v, e};
  };

  auto [value, error] = totals();
  while (error > options.rel_tol * std::fabs(value) && pieces.size() < options.max_intervals) {
    std::vector<std::size_t> order(pieces.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const std::size_t take = std::min(options.batch, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&](std::size_t x, std::size_t y) {
                        if (pieces[x].error != pieces[y].error) return pieces[x].error > pieces[y].error;
                        return x < y;
                      });
    std::vector<Piece> children;
    std::vector<std::size_t> chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));
    std::sort(chosen.begin(), chosen.end());
    for (std::size_t i : chosen) {
      const Piece& parent = pieces[i];
      const double mid = 0.5 * (parent.lo + parent.hi);
      children.push_back({parent.lo, mid, parent.squared});
      children.push_back({mid, parent.hi, parent.squared});
    }
    evaluate(children, f, density);
    for (std::size_t k = chosen.size(); k-- > 0;) {
      pieces.erase(pieces.begin() + static_cast<std::ptrdiff_t>(chosen[k]));
    }
    pieces.insert(pieces.end(), children.begin(), children.end());
    std::tie(value, error) = totals();
  }
  if (error > 0.01 * std::fabs(value)) throw QuadratureNotConverged(value, error);
  return {value, error, pieces.size()};
}

DpOptions default_dp() {
  DpOptions options;
  options.horizon = 100'000'000;
  options.trim = 1e-20;
  return options;
}

QuadratureResult integrated_effort(const DensitySpec& density, const StoppingRule& rule,
                                   const QuadOptions& options, const DpOptions& dp) {
  CachedFunction f([&](double p) { return effort_and_probs(p, rule, dp).expected_effort; });
  return integrate_density(density, rule.set(), f, options);
}

QuadratureResult integrated_lower_bound(const DensitySpec& density, const BucketSet& set,
                                        const LowerBoundConfig& config, const QuadOptions& options) {
  CachedFunction f([&](double p) { return lower_bound_improved(p, set, config); });
  return integrate_density(density, set, f, options);
}

Table2 table2(double eps, double spending_k, const QuadOptions& options) {
  const BucketSet j = bucket_set_jstar();
  const RlRule rl(j, eps);
  const SimctestTables tables(j, SpendingSequence::standard(eps / 2.0, spending_k));
  const SimctestRule sim(j, tables);
  const DpOptions dp = default_dp();
  const LowerBoundConfig lb{eps, 1e-3};
  CachedFunction f_rl([&](double p) { return effort_and_probs(p, rl, dp).expected_effort; });
  CachedFunction f_sim([&](double p) { return effort_and_probs(p, sim, dp).expected_effort; });
  CachedFunction f_lb([&](double p) { return lower_bound_improved(p, j, lb); });
  CachedFunction* columns[3] = {&f_rl, &f_sim, &f_lb};
  const DensitySpec rows[3] = {DensitySpec::h0(), DensitySpec::h1a(), DensitySpec::h1b()};
  Table2 t;
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      const QuadratureResult q = integrate_density(rows[r], j, *columns[c], options);
      t.value[r][c] = q.value;
      t.error[r][c] = q.error;
    }
  }
  return t;
}

void write_table2_csv(std::ostream& out, const Table2& table) {
  static const char* names[3] = {"H0", "H1a", "H1b"};
  out << "distribution,robbins_lai,simctest,lower_bound\n";
  char buf[128];
  for (std::size_t r = 0; r < 3; ++r) {
    std::snprintf(buf, sizeof buf, "%s,%.1f,%.1f,%.1f\n", names[r], table.value[r][0], table.value[r][1],
                  table.value[r][2]);
    out << buf;
  }
}

std::vector<double> uniform_grid(std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  return g;
}

std::vector<EffortCurveRow> effort_curve(const std::vector<double>& grid, const RlRule& rl,
                                         const SimctestRule& sim, const LowerBoundConfig& config,
                                         bool parallel) {
  std::vector<EffortCurveRow> rows(grid.size());
  const DpOptions dp = default_dp();
  parallel_for(
      grid.size(),
      [&](std::size_t i) {
        const double p = grid[i];
        rows[i] = {p, effort_and_probs(p, rl, dp).expected_effort, effort_and_probs(p, sim, dp).expected_effort,
                   lower_bound_basic(p, rl.set(), config.eps), lower_bound_improved(p, rl.set(), config)};
      },
      parallel);
  return rows;
}

void write_effort_csv(std::ostream& out, const std::vector<EffortCurveRow>& rows) {
  out << "p,effort_rl,effort_simctest,lower_basic,lower_improved\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.10g,%.10g,%.10g,%.10g\n", r.p, r.effort_rl, r.effort_simctest,
                  r.lower_basic, r.lower_improved);
    out << buf;
  }
}

ProbCurve decision_curve(const std::vector<double>& grid, const StoppingRule& rule, bool parallel) {
  const BucketSet& set = rule.set();
  ProbCurve curve;
  curve.p = grid;
  std::vector<std::size_t> column(set.size());
  for (std::size_t b : set.priority()) {
    const std::string code = star_rating(set, set[b]).str();
    const auto it = std::find(curve.codes.begin(), curve.codes.end(), code);
    column[b] = static_cast<std::size_t>(it - curve.codes.begin());
    if (it == curve.codes.end()) curve.codes.push_back(code);
  }
  curve.probs.assign(grid.size(), std::vector<double>(curve.codes.size(), 0.0));
  const DpOptions dp = default_dp();
  parallel_for(
      grid.size(),
      [&](std::size_t i) {
        const EffortResult r = effort_and_probs(grid[i], rule, dp);
        for (std::size_t b = 0; b < set.size(); ++b) curve.probs[i][column[b]] += r.decision_probs[b];
      },
      parallel);
  return curve;
}

void write_prob_csv(std::ostream& out, const ProbCurve& curve) {
  out << "p";
  for (const auto& code : curve.codes) out << ",\"" << code << '"';
  out << '\n';
  char buf[64];
  for (std::size_t i = 0; i < curve.p.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", curve.p[i]);
    out << buf;
    for (double x : curve.probs[i]) {
      std::snprintf(buf, sizeof buf, ",%.12g", x);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace mcb
