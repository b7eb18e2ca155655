#include <cmath>
#include <ostream>
#include <random>

#include "json.hpp"
#include "mcb/analysis.hpp"
#include "mcb/engine.hpp"
#include "mcb/errors.hpp"
#include "mcb/parallel.hpp"
#include "mcb/special_functions.hpp"
#include "mcb/stream.hpp"

namespace mcb {

namespace {

// Stream ids for p-value generation live apart from the sampling streams.
constexpr std::uint64_t kTruthDomain = 0x7275746870766c73ULL;

}  // namespace

std::vector<double> screen_p_values(const ScreenSpec& spec, std::uint64_t seed) {
  if (spec.hypotheses < 0 || spec.alternatives < 0 || spec.alternatives > spec.hypotheses) {
    throw InvalidConfig("screening needs 0 <= alternatives <= hypotheses");
  }
  std::vector<double> p(static_cast<std::size_t>(spec.hypotheses));
  for (std::int64_t i = 0; i < spec.hypotheses; ++i) {
    CounterRng rng(seed ^ kTruthDomain, static_cast<std::uint64_t>(i));
    if (i < spec.alternatives) {
      const double ncp = spec.ncp_lo + (spec.ncp_hi - spec.ncp_lo) * rng.uniform();
      std::normal_distribution<double> z;
      std::chi_squared_distribution<double> v(spec.df);
      const double x = (z(rng) + ncp) / std::sqrt(v(rng) / spec.df);
      p[static_cast<std::size_t>(i)] = student_t_sf(x, spec.df);
    } else {
      p[static_cast<std::size_t>(i)] = rng.uniform();
    }
  }
  return p;
}

ScreenReport screen(const ScreenSpec& spec, const BucketSet& set, double eps, const BatchSchedule& schedule,
                    std::uint64_t seed, std::int64_t n_cap, bool parallel) {
  EngineOptions options;
  options.method = Method::simctest;
  options.eps = eps;
  options.schedule = schedule;
  options.n_cap = n_cap;
  const Engine engine(set, options);

  ScreenReport report;
  report.buckets = set.buckets();
  report.true_p = screen_p_values(spec, seed);
  const std::size_t n = report.true_p.size();
  report.decided.assign(n, 0);
  report.samples.assign(n, 0);
  std::vector<char> truncated(n, 0);
  parallel_for(
      n,
      [&](std::size_t i) {
        BernoulliStream stream(report.true_p[i], seed, i);
        const DecisionReport r = engine.run(stream);
        report.decided[i] = r.bucket_index;
        report.samples[i] = r.samples_used;
        truncated[i] = r.truncated ? 1 : 0;
      },
      parallel);

  report.null_counts.assign(set.size(), 0);
  report.alt_counts.assign(set.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& counts = static_cast<std::int64_t>(i) < spec.alternatives ? report.alt_counts : report.null_counts;
    ++counts[report.decided[i]];
    report.total_samples += report.samples[i];
    report.truncated += truncated[i];
  }
  if (n > 0) {
    report.mean_samples = static_cast<double>(report.total_samples) / static_cast<double>(n);
    report.naive_floor = 1.0 / report.mean_samples;
  }
  return report;
}

void write_screen_csv(std::ostream& out, const ScreenReport& report) {
  out << "lo,hi,lo_closed,hi_closed,alternatives,nulls\n";
  char buf[160];
  for (std::size_t b = 0; b < report.buckets.size(); ++b) {
    const Bucket& k = report.buckets[b];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%d,%lld,%lld\n", k.lo, k.hi, k.lo_closed ? 1 : 0,
                  k.hi_closed ? 1 : 0, static_cast<long long>(report.alt_counts[b]),
                  static_cast<long long>(report.null_counts[b]));
    out << buf;
  }
}

std::string screen_summary_json(const ScreenReport& report) {
  nlohmann::ordered_json doc;
  doc["hypotheses"] = report.true_p.size();
  doc["total_samples"] = report.total_samples;
  doc["mean_samples"] = report.mean_samples;
  doc["naive_floor"] = report.naive_floor;
  doc["truncated"] = report.truncated;
  doc["allocation"] = nlohmann::ordered_json::array();
  for (std::size_t b = 0; b < report.buckets.size(); ++b) {
    const Bucket& k = report.buckets[b];
    doc["allocation"].push_back({{"lo", k.lo},
                                 {"hi", k.hi},
                                 {"alternatives", report.alt_counts[b]},
                                 {"nulls", report.null_counts[b]}});
  }
  return doc.dump(2);
}

}  // namespace mcb
