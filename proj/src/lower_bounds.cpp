#include <algorithm>
#include <cmath>
#include <limits>

#include "mcb/analysis.hpp"
#include "mcb/errors.hpp"

namespace mcb {

namespace {

// KL(p0 || p1) for Bernoulli laws; p1 strictly inside (0,1).
double bernoulli_kl(double p0, double p1) {
  double d = 0.0;
  if (p0 > 0.0) d += p0 * std::log(p0 / p1);
  if (p0 < 1.0) d += (1.0 - p0) * std::log1p(-p0) - (1.0 - p0) * std::log1p(-p1);
  return d;
}

double wald_numerator(double a, double b) {
  if (a + b >= 1.0) return 0.0;
  double t = (1.0 - a) * (std::log1p(-a) - std::log(b));
  if (a > 0.0) t += a * (std::log(a) - std::log1p(-b));
  return t;
}

// Points just outside [lo, hi] within (0,1).
void outside_points(double lo, double hi, std::vector<double>& out) {
  out.clear();
  if (lo > 0.0) out.push_back(lo);
  if (hi < 1.0) out.push_back(hi);
}

}  // namespace

double wald_bound(double p0, double p1, double type1, double type2) {
  if (p0 == p1) throw DegenerateAlternative("wald_bound needs p0 != p1");
  if (!(p0 >= 0.0 && p0 <= 1.0 && p1 >= 0.0 && p1 <= 1.0)) throw InvalidConfig("probabilities outside [0,1]");
  if (!(type1 >= 0.0 && type1 <= 1.0 && type2 > 0.0 && type2 < 1.0)) {
    throw InvalidConfig("error rates outside their range");
  }
  // An alternative at 0 or 1 is told apart in one step with certainty.
  if (p1 <= 0.0 || p1 >= 1.0) return 0.0;
  const double num = wald_numerator(type1, type2);
  if (num <= 0.0) return 0.0;
  return num / bernoulli_kl(p0, p1);
}

double lower_bound_basic(double p, const BucketSet& set, double eps) {
  double lo = 1.0;
  double hi = 0.0;
  for (const Bucket& b : set.buckets()) {
    if (!b.contains(p)) continue;
    lo = std::min(lo, b.lo);
    hi = std::max(hi, b.hi);
  }
  std::vector<double> qs;
  outside_points(lo, hi, qs);
  double best = 0.0;
  for (double q : qs) {
    if (q != p) best = std::max(best, wald_bound(p, q, eps, eps));
  }
  return best;
}

double lower_bound_improved(double p, const BucketSet& set, const LowerBoundConfig& config) {
  if (!(config.delta > 0.0 && config.delta <= 0.1)) throw InvalidConfig("eta grid width must lie in (0, 0.1]");
  const double basic = lower_bound_basic(p, set, config.eps);
  std::vector<const Bucket*> holding;
  for (const Bucket& b : set.buckets()) {
    if (b.contains(p)) holding.push_back(&b);
  }
  if (holding.size() != 2) return basic;

  // KL to each boundary point of J1 and J2; the numerators vary with eta only.
  std::vector<double> q1, q2;
  outside_points(holding[0]->lo, holding[0]->hi, q1);
  outside_points(holding[1]->lo, holding[1]->hi, q2);
  auto min_kl = [&](const std::vector<double>& qs) {
    double d = std::numeric_limits<double>::infinity();
    for (double q : qs) {
      if (q == p) return 0.0;
      d = std::min(d, bernoulli_kl(p, q));
    }
    return d;
  };
  const double d1 = min_kl(q1);
  const double d2 = min_kl(q2);
  auto term = [&](double num, double d) {
    if (num <= 0.0) return 0.0;
    if (d <= 0.0) return std::numeric_limits<double>::infinity();
    return num / d;
  };

  const auto steps = static_cast<std::int64_t>(std::llround(1.0 / config.delta));
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t k = 0; k <= steps; ++k) {
    const double eta = std::min(1.0, static_cast<double>(k) * config.delta);
    const double b1 = term(wald_numerator(1.0 - eta, config.eps), d1);
    const double b2 = term(wald_numerator(std::min(1.0, eta + config.delta + config.eps), config.eps), d2);
    best = std::min(best, std::max(b1, b2));
  }
  return std::max(basic, best);
}

}  // namespace mcb
