#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcb/interval.hpp"

namespace mcb {

/// A p-value bucket: an interval of positive length inside [0,1].
using Bucket = Interval;

/// Builds a bucket, throwing DegenerateBucket unless 0 <= lo < hi <= 1.
Bucket make_bucket(double lo, double hi, bool lo_closed, bool hi_closed);

/// Finite family of buckets covering [0,1], stored sorted by (lo, hi).
class BucketSet {
 public:
  BucketSet() = default;

  const std::vector<Bucket>& buckets() const { return buckets_; }
  std::size_t size() const { return buckets_.size(); }
  const Bucket& operator[](std::size_t i) const { return buckets_[i]; }
  const std::string& name() const { return name_; }

  /// Interior bucket endpoints (every min/max except 0 and 1), sorted and unique.
  const std::vector<double>& boundaries() const { return boundaries_; }

  std::optional<std::size_t> index_of(const Bucket& bucket) const;

  /// Bucket indices in reporting preference: smallest upper endpoint first, then
  /// largest lower endpoint.
  const std::vector<std::size_t>& priority() const { return priority_; }

  /// Preferred bucket containing `interval`, if any.
  std::optional<std::size_t> select_containing(const Interval& interval) const;

  /// Preferred bucket containing the point p.
  std::size_t select_point(double p) const;

  friend BucketSet validate(std::vector<Bucket> buckets, std::string name);

 private:
  std::vector<Bucket> buckets_;
  std::vector<double> boundaries_;
  std::vector<std::size_t> priority_;
  std::string name_;
};

/// Checks coverage of [0,1] (closure-exact) and positive lengths.
/// Throws CoverageGap or DegenerateBucket.
BucketSet validate(std::vector<Bucket> buckets, std::string name = {});

/// True iff every p in (0,1) lies in the open interior of some bucket.
bool is_overlapping(const BucketSet& set);

/// A constant c > 0 such that every interval of length < c inside [0,1] is a
/// subset of some bucket. Returns 0 for non-overlapping sets.
double containment_constant(const BucketSet& set);

struct RatingCode {
  int stars = 0;
  bool tilde = false;

  std::string str() const;
  friend bool operator==(const RatingCode&, const RatingCode&) = default;
};

inline const std::vector<double>& classical_thresholds() {
  static const std::vector<double> levels{0.001, 0.01, 0.05};
  return levels;
}

/// Extended star rating of a decided bucket. Throws BucketNotInSet.
RatingCode star_rating(const BucketSet& set, const Bucket& decided,
                       const std::vector<double>& classical = classical_thresholds());

/// Classical buckets [0,t1], (t1,t2], ..., (tm,1] for sorted thresholds in (0,1).
std::vector<Bucket> classical_buckets(const std::vector<double>& thresholds);

/// Classical buckets plus (rho*t, t/rho] around every threshold.
BucketSet gen_proportional(const std::vector<double>& thresholds, double rho);

/// Classical buckets plus [t - rho*sqrt(t), t + rho*sqrt(t)] around every threshold.
BucketSet gen_sqrt(const std::vector<double>& thresholds, double rho);

/// Classical buckets plus, per threshold, the hull of all (1-eps) Clopper-Pearson
/// intervals for n samples that contain the threshold.
BucketSet gen_match_naive(const std::vector<double>& thresholds, std::int64_t n, double eps);

BucketSet bucket_set_j0();
BucketSet bucket_set_jstar();
BucketSet bucket_set_js();
BucketSet bucket_set_single();

/// Resolves "J0", "Jstar", "Js", "single"; throws InvalidConfig otherwise.
BucketSet named_bucket_set(std::string_view name);

std::string bucket_set_to_json(const BucketSet& set);
BucketSet bucket_set_from_json(std::string_view text);

/// Named set, or else a path to a JSON bucket file.
BucketSet load_bucket_set(const std::string& name_or_path);

}  // namespace mcb
