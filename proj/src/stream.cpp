#include "mcb/stream.hpp"

#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "mcb/errors.hpp"

namespace mcb {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(seed ^ splitmix64(stream ^ 0x5851F42D4C957F2DULL))) {}

CounterRng::result_type CounterRng::operator()() {
  ++counter_;
  return splitmix64(key_ + counter_ * 0xD1B54A32D192ED03ULL);
}

double CounterRng::uniform() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

BernoulliStream::BernoulliStream(double p, std::uint64_t seed, std::uint64_t stream)
    : p_(p), rng_(seed, stream) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidConfig("Bernoulli stream needs p in [0,1]");
}

std::int64_t BernoulliStream::next_batch(std::int64_t size) {
  if (size < 0) throw StreamError("negative batch size");
  if (p_ == 0.0 || size == 0) return 0;
  if (p_ == 1.0) return size;
  if (size == 1) return rng_.uniform() < p_ ? 1 : 0;
  std::binomial_distribution<std::int64_t> draw(size, p_);
  return draw(rng_);
}

std::int64_t CallbackStream::next_batch(std::int64_t size) {
  const std::int64_t x = fn_(size);
  if (x < 0 || x > size) throw StreamError("callback returned an impossible exceedance count");
  return x;
}

std::int64_t RecordedStream::next_batch(std::int64_t size) {
  std::string line;
  do {
    if (!std::getline(in_, line)) {
      throw StreamError("recorded stream ended after " + std::to_string(line_) + " batches");
    }
    ++line_;
  } while (line.empty() || line[0] == '#');
  std::istringstream fields(line);
  std::int64_t batch = 0;
  std::int64_t hits = 0;
  char comma = 0;
  if (!(fields >> batch >> comma >> hits) || comma != ',') {
    throw StreamError("malformed recorded batch at line " + std::to_string(line_));
  }
  if (batch != size) {
    throw StreamError("recorded batch " + std::to_string(line_) + " has size " +
                      std::to_string(batch) + ", schedule asks for " + std::to_string(size));
  }
  if (hits < 0 || hits > batch) {
    throw StreamError("recorded batch " + std::to_string(line_) + " has impossible count");
  }
  return hits;
}

std::int64_t RecordingStream::next_batch(std::int64_t size) {
  const std::int64_t x = inner_.next_batch(size);
  out_ << size << ',' << x << '\n';
  return x;
}

}  // namespace mcb
