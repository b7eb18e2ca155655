#include "mcb/buckets.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "mcb/binomial.hpp"
#include "mcb/errors.hpp"

namespace mcb {

std::string to_string(const Interval& interval) {
  std::ostringstream out;
  out.precision(12);
  out << (interval.lo_closed ? '[' : '(') << interval.lo << ',' << interval.hi
      << (interval.hi_closed ? ']' : ')');
  return out.str();
}

Bucket make_bucket(double lo, double hi, bool lo_closed, bool hi_closed) {
  if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) {
    std::ostringstream msg;
    msg << "bucket needs 0 <= lo < hi <= 1, got lo=" << lo << " hi=" << hi;
    throw DegenerateBucket(msg.str());
  }
  return {lo, hi, lo_closed, hi_closed};
}

namespace {

bool bucket_less(const Bucket& a, const Bucket& b) {
  if (a.lo != b.lo) return a.lo < b.lo;
  if (a.hi != b.hi) return a.hi < b.hi;
  if (a.lo_closed != b.lo_closed) return a.lo_closed;
  return !a.hi_closed && b.hi_closed;
}

bool covered(const std::vector<Bucket>& buckets, double p) {
  return std::any_of(buckets.begin(), buckets.end(), [p](const Bucket& b) { return b.contains(p); });
}

}  // namespace

BucketSet validate(std::vector<Bucket> buckets, std::string name) {
  if (buckets.empty()) throw CoverageGap(0.0);
  for (const auto& b : buckets) make_bucket(b.lo, b.hi, b.lo_closed, b.hi_closed);
  std::sort(buckets.begin(), buckets.end(), bucket_less);
  buckets.erase(std::unique(buckets.begin(), buckets.end()), buckets.end());

  // Coverage can only change at endpoints, so endpoints and the midpoints
  // between consecutive endpoints are a complete set of witnesses.
  std::vector<double> points{0.0, 1.0};
  for (const auto& b : buckets) {
    points.push_back(b.lo);
    points.push_back(b.hi);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!covered(buckets, points[i])) throw CoverageGap(points[i]);
    if (i + 1 < points.size()) {
      const double mid = 0.5 * (points[i] + points[i + 1]);
      if (!covered(buckets, mid)) throw CoverageGap(mid);
    }
  }

  BucketSet set;
  set.name_ = std::move(name);
  set.buckets_ = std::move(buckets);
  for (double p : points) {
    if (p > 0.0 && p < 1.0) set.boundaries_.push_back(p);
  }
  set.priority_.resize(set.buckets_.size());
  for (std::size_t i = 0; i < set.priority_.size(); ++i) set.priority_[i] = i;
  std::stable_sort(set.priority_.begin(), set.priority_.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = set.buckets_[a];
    const auto& y = set.buckets_[b];
    if (x.hi != y.hi) return x.hi < y.hi;
    return x.lo > y.lo;
  });
  return set;
}

std::optional<std::size_t> BucketSet::index_of(const Bucket& bucket) const {
  for (std::size_t i = 0; i < buckets_.size(); ++i) {
    if (buckets_[i] == bucket) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> BucketSet::select_containing(const Interval& interval) const {
  for (std::size_t i : priority_) {
    if (interval.subset_of(buckets_[i])) return i;
  }
  return std::nullopt;
}

std::size_t BucketSet::select_point(double p) const {
  for (std::size_t i : priority_) {
    if (buckets_[i].contains(p)) return i;
  }
  throw CoverageGap(p);
}

bool is_overlapping(const BucketSet& set) {
  const auto& bs = set.buckets();
  auto interior = [&](double p) {
    return std::any_of(bs.begin(), bs.end(), [p](const Bucket& b) { return b.interior_contains(p); });
  };
  const auto& a = set.boundaries();
  double prev = 0.0;
  for (double p : a) {
    if (!interior(p) || !interior(0.5 * (prev + p))) return false;
    prev = p;
  }
  return interior(0.5 * (prev + 1.0));
}

double containment_constant(const BucketSet& set) {
  if (!is_overlapping(set)) return 0.0;
  const auto& bs = set.buckets();
  std::vector<double> points{0.0};
  points.insert(points.end(), set.boundaries().begin(), set.boundaries().end());
  points.push_back(1.0);

  double c = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < points.size(); ++i) c = std::min(c, points[i] - points[i - 1]);

  for (double a : points) {
    double best = 0.0;
    for (const auto& b : bs) {
      double margin = 0.0;
      if (a == 0.0) {
        if (b.lo == 0.0 && b.lo_closed) margin = b.hi;
      } else if (a == 1.0) {
        if (b.hi == 1.0 && b.hi_closed) margin = 1.0 - b.lo;
      } else if (b.interior_contains(a)) {
        margin = std::min(a - b.lo, b.hi - a);
      }
      best = std::max(best, margin);
    }
    c = std::min(c, best);
  }
  return c;
}

std::string RatingCode::str() const {
  std::string out(static_cast<std::size_t>(stars), '*');
  if (tilde) out += '~';
  return out;
}

RatingCode star_rating(const BucketSet& set, const Bucket& decided,
                       const std::vector<double>& classical) {
  if (!set.index_of(decided)) {
    throw BucketNotInSet("bucket " + to_string(decided) + " is not part of the set");
  }
  const int m = static_cast<int>(classical.size());
  const bool straddles = std::any_of(classical.begin(), classical.end(),
                                     [&](double t) { return decided.interior_contains(t); });
  RatingCode code;
  code.tilde = straddles;
  for (int i = 0; i < m; ++i) {
    const double t = classical[static_cast<std::size_t>(i)];
    const bool qualifies = straddles ? t > decided.hi : t >= decided.hi;
    if (qualifies) {
      code.stars = m - i;
      break;
    }
  }
  return code;
}

std::vector<Bucket> classical_buckets(const std::vector<double>& thresholds) {
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw InvalidConfig("thresholds must be sorted");
  }
  std::vector<Bucket> out;
  double lo = 0.0;
  bool lo_closed = true;
  for (double t : thresholds) {
    out.push_back(make_bucket(lo, t, lo_closed, true));
    lo = t;
    lo_closed = false;
  }
  out.push_back(make_bucket(lo, 1.0, lo_closed, true));
  return out;
}

namespace {

void check_no_collision(const std::vector<double>& thresholds, std::size_t i, double lo, double hi) {
  for (std::size_t j = 0; j < thresholds.size(); ++j) {
    if (j != i && thresholds[j] >= lo && thresholds[j] <= hi) {
      std::ostringstream msg;
      msg << "overlap bucket around " << thresholds[i] << " reaches threshold " << thresholds[j];
      throw OverlapCollision(msg.str());
    }
  }
}

}  // namespace

BucketSet gen_proportional(const std::vector<double>& thresholds, double rho) {
  if (!(rho > 0.0)) throw InvalidConfig("rho must be positive");
  if (rho >= 1.0) throw DegenerateBucket("rho >= 1 gives overlap buckets of non-positive length");
  auto buckets = classical_buckets(thresholds);
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double t = thresholds[i];
    const double lo = rho * t;
    const double hi = std::min(t / rho, 1.0);
    check_no_collision(thresholds, i, lo, hi);
    buckets.push_back(make_bucket(lo, hi, false, true));
  }
  return validate(std::move(buckets), "proportional");
}

BucketSet gen_sqrt(const std::vector<double>& thresholds, double rho) {
  if (!(rho > 0.0)) throw DegenerateBucket("rho must be positive");
  auto buckets = classical_buckets(thresholds);
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double t = thresholds[i];
    const double half = rho * std::sqrt(t);
    if (t - half <= 0.0) throw RhoTooLarge(t);
    const double hi = std::min(t + half, 1.0);
    check_no_collision(thresholds, i, t - half, hi);
    buckets.push_back(make_bucket(t - half, hi, true, true));
  }
  return validate(std::move(buckets), "sqrt");
}

BucketSet gen_match_naive(const std::vector<double>& thresholds, std::int64_t n, double eps) {
  if (n < 1) throw InvalidConfig("gen_match_naive needs n >= 1");
  auto buckets = classical_buckets(thresholds);
  std::vector<Interval> cis;
  cis.reserve(static_cast<std::size_t>(n) + 1);
  for (std::int64_t s = 0; s <= n; ++s) cis.push_back(clopper_pearson(s, n, eps));
  for (double t : thresholds) {
    double lo = 1.0;
    double hi = 0.0;
    for (const auto& ci : cis) {
      if (ci.contains(t)) {
        lo = std::min(lo, ci.lo);
        hi = std::max(hi, ci.hi);
      }
    }
    buckets.push_back(make_bucket(lo, hi, true, true));
  }
  return validate(std::move(buckets), "match_naive");
}

BucketSet bucket_set_j0() {
  return validate(classical_buckets(classical_thresholds()), "J0");
}

BucketSet bucket_set_jstar() {
  auto buckets = classical_buckets(classical_thresholds());
  buckets.push_back(Interval::left_open(5e-4, 2e-3));
  buckets.push_back(Interval::left_open(0.008, 0.012));
  buckets.push_back(Interval::left_open(0.045, 0.055));
  return validate(std::move(buckets), "Jstar");
}

BucketSet bucket_set_js() {
  // Powers of ten written out so that thresholds are exact decimal literals.
  static constexpr double kPow[] = {1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0};
  std::vector<Bucket> buckets{Interval::closed(0.0, 1e-7)};
  for (int i = -6; i <= 0; ++i) {
    buckets.push_back(Interval::left_open(kPow[i + 6], kPow[i + 8]));
  }
  return validate(std::move(buckets), "Js");
}

BucketSet bucket_set_single() { return validate({Interval::unit()}, "single"); }

BucketSet named_bucket_set(std::string_view name) {
  if (name == "J0") return bucket_set_j0();
  if (name == "Jstar") return bucket_set_jstar();
  if (name == "Js") return bucket_set_js();
  if (name == "single") return bucket_set_single();
  throw InvalidConfig("unknown bucket set '" + std::string(name) + "'");
}

std::string bucket_set_to_json(const BucketSet& set) {
  nlohmann::json doc;
  doc["name"] = set.name();
  doc["buckets"] = nlohmann::json::array();
  for (const auto& b : set.buckets()) {
    doc["buckets"].push_back(
        {{"lo", b.lo}, {"hi", b.hi}, {"lo_closed", b.lo_closed}, {"hi_closed", b.hi_closed}});
  }
  return doc.dump(2);
}

BucketSet bucket_set_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("bucket JSON: ") + e.what());
  }
  if (!doc.contains("buckets") || !doc["buckets"].is_array()) {
    throw InvalidConfig("bucket JSON needs a 'buckets' array");
  }
  std::vector<Bucket> buckets;
  try {
    for (const auto& item : doc["buckets"]) {
      buckets.push_back({item.at("lo").get<double>(), item.at("hi").get<double>(),
                         item.value("lo_closed", false), item.value("hi_closed", true)});
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("bucket JSON: ") + e.what());
  }
  return validate(std::move(buckets), doc.value("name", std::string{}));
}

BucketSet load_bucket_set(const std::string& name_or_path) {
  if (name_or_path == "J0" || name_or_path == "Jstar" || name_or_path == "Js" ||
      name_or_path == "single") {
    return named_bucket_set(name_or_path);
  }
  std::ifstream in(name_or_path);
  if (!in) throw InvalidConfig("no bucket set named or stored at '" + name_or_path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return bucket_set_from_json(buf.str());
}

}  // namespace mcb
