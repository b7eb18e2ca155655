#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>

namespace mcb {

/// Counter-based generator: output i is splitmix64(key + i * gamma), with the
/// key derived from (seed, stream). Streams with distinct ids are independent
/// and reproducible regardless of how they are interleaved.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform double in (0,1).
  double uniform();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Source of exceedance counts X_i, drawn in batches.
class ExceedanceStream {
 public:
  virtual ~ExceedanceStream() = default;
  /// Number of exceedances among the next `size` samples.
  virtual std::int64_t next_batch(std::int64_t size) = 0;
};

/// Bernoulli(p) samples from a CounterRng stream.
class BernoulliStream final : public ExceedanceStream {
 public:
  BernoulliStream(double p, std::uint64_t seed, std::uint64_t stream = 0);
  std::int64_t next_batch(std::int64_t size) override;

 private:
  double p_;
  CounterRng rng_;
};

class CallbackStream final : public ExceedanceStream {
 public:
  explicit CallbackStream(std::function<std::int64_t(std::int64_t)> fn) : fn_(std::move(fn)) {}
  std::int64_t next_batch(std::int64_t size) override;

 private:
  std::function<std::int64_t(std::int64_t)> fn_;
};

/// Replays "batch_size,exceedances" lines. Throws StreamError when the
/// requested size differs from the recorded one or the file runs out.
class RecordedStream final : public ExceedanceStream {
 public:
  explicit RecordedStream(std::istream& in) : in_(in) {}
  std::int64_t next_batch(std::int64_t size) override;

 private:
  std::istream& in_;
  std::int64_t line_ = 0;
};

/// Forwards to another stream and writes each batch as "batch_size,exceedances".
class RecordingStream final : public ExceedanceStream {
 public:
  RecordingStream(ExceedanceStream& inner, std::ostream& out) : inner_(inner), out_(out) {}
  std::int64_t next_batch(std::int64_t size) override;

 private:
  ExceedanceStream& inner_;
  std::ostream& out_;
};

}  // namespace mcb
