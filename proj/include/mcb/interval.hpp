#pragma once

#include <string>

namespace mcb {

/// Sub-interval of [0,1] with explicit closure on each side.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool lo_closed = true;
  bool hi_closed = true;

  static constexpr Interval closed(double lo, double hi) { return {lo, hi, true, true}; }
  static constexpr Interval left_open(double lo, double hi) { return {lo, hi, false, true}; }
  static constexpr Interval unit() { return {0.0, 1.0, true, true}; }

  bool contains(double p) const {
    const bool above = lo_closed ? p >= lo : p > lo;
    const bool below = hi_closed ? p <= hi : p < hi;
    return above && below;
  }

  bool interior_contains(double p) const { return p > lo && p < hi; }

  bool empty() const { return lo > hi || (lo == hi && !(lo_closed && hi_closed)); }

  double length() const { return hi - lo; }

  /// True iff this interval is a subset of `outer`. Empty intervals are subsets of anything.
  bool subset_of(const Interval& outer) const {
    if (empty()) return true;
    const bool lower_ok = outer.lo < lo || (outer.lo == lo && (outer.lo_closed || !lo_closed));
    const bool upper_ok = hi < outer.hi || (hi == outer.hi && (outer.hi_closed || !hi_closed));
    return lower_ok && upper_ok;
  }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Renders e.g. "(0.001,0.01]".
std::string to_string(const Interval& interval);

}  // namespace mcb
