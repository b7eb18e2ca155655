#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mcb {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CoverageGap : public Error {
 public:
  explicit CoverageGap(double point)
      : Error("bucket set leaves point " + std::to_string(point) + " uncovered"), point_(point) {}
  double point() const noexcept { return point_; }

 private:
  double point_;
};

class DegenerateBucket : public Error {
 public:
  using Error::Error;
};

class BucketNotInSet : public Error {
 public:
  using Error::Error;
};

class OverlapCollision : public Error {
 public:
  using Error::Error;
};

class RhoTooLarge : public Error {
 public:
  explicit RhoTooLarge(double threshold)
      : Error("rho too large for threshold " + std::to_string(threshold)), threshold_(threshold) {}
  double threshold() const noexcept { return threshold_; }

 private:
  double threshold_;
};

class OverflowGuard : public Error {
 public:
  using Error::Error;
};

class NMaxTooSmall : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

class InconsistentDecisions : public Error {
 public:
  using Error::Error;
};

class NotClosed : public Error {
 public:
  explicit NotClosed(std::int64_t n_max)
      : Error("alive states remain at n_max = " + std::to_string(n_max)), n_max_(n_max) {}
  std::int64_t n_max() const noexcept { return n_max_; }

 private:
  std::int64_t n_max_;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class DegenerateAlternative : public Error {
 public:
  using Error::Error;
};

class QuadratureNotConverged : public Error {
 public:
  QuadratureNotConverged(double value, double error)
      : Error("quadrature error estimate " + std::to_string(error) + " exceeds 1% of " +
              std::to_string(value)),
        value_(value),
        error_(error) {}
  double value() const noexcept { return value_; }
  double error() const noexcept { return error_; }

 private:
  double value_;
  double error_;
};

class StreamError : public Error {
 public:
  using Error::Error;
};

}  // namespace mcb
