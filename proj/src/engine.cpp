#include "mcb/engine.hpp"

#include <cmath>

#include "json.hpp"
#include "mcb/confseq_rl.hpp"
#include "mcb/errors.hpp"

namespace mcb {

std::string to_string(Method method) { return method == Method::rl ? "rl" : "simctest"; }

Method parse_method(const std::string& name) {
  if (name == "rl") return Method::rl;
  if (name == "simctest") return Method::simctest;
  throw InvalidConfig("unknown method '" + name + "' (expected rl or simctest)");
}

namespace {

const char* status_name(ThresholdStatus s) {
  switch (s) {
    case ThresholdStatus::below: return "below";
    case ThresholdStatus::above: return "above";
    default: return "undecided";
  }
}

}  // namespace

std::string report_to_json(const DecisionReport& report) {
  nlohmann::ordered_json doc;
  doc["bucket"] = {{"lo", report.bucket.lo},
                   {"hi", report.bucket.hi},
                   {"lo_closed", report.bucket.lo_closed},
                   {"hi_closed", report.bucket.hi_closed}};
  doc["rating"] = report.rating.str();
  doc["samples_used"] = report.samples_used;
  doc["S_final"] = report.successes;
  doc["method"] = to_string(report.method);
  doc["truncated"] = report.truncated;
  if (report.method == Method::simctest) {
    doc["hits"] = nlohmann::ordered_json::array();
    for (const auto& h : report.hits) {
      nlohmann::ordered_json entry{{"alpha", h.alpha}, {"status", status_name(h.status)}};
      if (h.status != ThresholdStatus::undecided) entry["n"] = h.n;
      doc["hits"].push_back(entry);
    }
  }
  return doc.dump(2);
}

Engine::Engine(BucketSet set, const EngineOptions& options)
    : set_(std::move(set)), options_(options), checkpoints_(options.schedule) {
  if (!(options_.eps > 0.0 && options_.eps < 1.0)) throw InvalidConfig("eps must lie in (0,1)");
  if (options_.n_cap < checkpoints_.n_at(0)) throw InvalidConfig("n_cap is below the first batch");
  if (options_.method == Method::simctest) {
    const double rho = options_.eps / 2.0;
    if (options_.rho != 0.0 && options_.rho != rho) {
      throw InvalidConfig("simctest needs rho = eps / 2 for joint coverage");
    }
    options_.rho = rho;
    tables_ = std::make_unique<SimctestTables>(set_, SpendingSequence::standard(rho, options_.spending_k),
                                               options_.schedule, options_.n_cap);
  } else {
    rl_ = std::make_unique<RlRule>(set_, options_.eps, options_.schedule);
  }
}

DecisionReport Engine::run(ExceedanceStream& stream) const {
  Decider d(*this);
  while (!d.done()) {
    const std::int64_t size = d.next_batch_size();
    if (size == 0) {
      d.truncate();
      break;
    }
    d.feed(stream.next_batch(size));
  }
  return d.report();
}

DecisionReport run(ExceedanceStream& stream, const BucketSet& set, const EngineOptions& options) {
  return Engine(set, options).run(stream);
}

Decider::Decider(const Engine& engine) : engine_(engine) {
  report_.method = engine.options().method;
  if (engine.tables()) {
    status_.assign(engine.tables()->size(), ThresholdStatus::undecided);
    hit_n_.assign(engine.tables()->size(), 0);
  }
}

std::int64_t Decider::next_batch_size() const {
  if (done_) return 0;
  const Checkpoints& cp = engine_.checkpoints();
  if (cp.n_at(check_) > engine_.options().n_cap) return 0;
  return cp.batch(check_);
}

void Decider::feed(std::int64_t exceedances) {
  if (done_) throw InvalidConfig("decider already stopped");
  const std::int64_t batch = engine_.checkpoints().batch(check_);
  if (exceedances < 0 || exceedances > batch) throw StreamError("exceedance count outside [0, batch]");
  n_ += batch;
  successes_ += exceedances;
  const bool stop = report_.method == Method::rl ? decide_rl() : decide_simctest();
  if (!stop) ++check_;
}

bool Decider::decide_rl() {
  const BucketSet& set = engine_.set();
  const RLState state{n_, successes_, engine_.options().eps};
  // I_n always contains S_n / n, so only buckets holding it can contain I_n.
  const double phat = static_cast<double>(successes_) / static_cast<double>(n_);
  const bool cached = check_ < Engine::kRlCachedChecks;
  for (std::size_t b : set.priority()) {
    if (!set[b].contains(phat)) continue;
    bool fits;
    if (cached) {
      const auto [lo, hi] = engine_.rl_rule()->fit_range(check_, b);
      fits = lo <= successes_ && successes_ <= hi;
    } else {
      fits = rl_contained(state, set[b]);
    }
    if (fits) {
      finish(b, false);
      return true;
    }
  }
  return false;
}

bool Decider::decide_simctest() {
  const SimctestTables& tables = *engine_.tables();
  const std::size_t m = tables.size();
  const BoundaryRow* prev = nullptr;
  for (std::size_t j = 0; j < m; ++j) {
    if (status_[j] != ThresholdStatus::undecided) continue;
    const BoundaryRow& row = tables[j].row(check_);
    if (prev && (row.lower < prev->lower || row.upper < prev->upper)) {
      throw InvalidConfig("boundaries not monotone in the threshold at n = " + std::to_string(n_));
    }
    prev = &row;
  }
  bool changed = check_ == 0;
  for (std::size_t j = 0; j < m; ++j) {
    if (status_[j] != ThresholdStatus::undecided) continue;
    const BoundaryRow& row = tables[j].row(check_);
    if (successes_ >= row.upper) {
      status_[j] = ThresholdStatus::above;
    } else if (successes_ <= row.lower) {
      status_[j] = ThresholdStatus::below;
    } else {
      continue;
    }
    hit_n_[j] = n_;
    changed = true;
  }
  // The interval only moves when a threshold is decided.
  if (!changed) return false;
  SimctestState state;
  state.n = n_;
  state.successes = successes_;
  for (std::size_t j = 0; j < m; ++j) state.hits.push_back({tables.thresholds()[j], status_[j], hit_n_[j]});
  const auto fit = engine_.set().select_containing(simctest_interval(state));
  if (!fit) return false;
  finish(*fit, false);
  return true;
}

void Decider::truncate() {
  if (done_) return;
  const double phat = n_ > 0 ? static_cast<double>(successes_) / static_cast<double>(n_) : 0.5;
  finish(engine_.set().select_point(phat), true);
}

void Decider::finish(std::size_t bucket, bool truncated) {
  const BucketSet& set = engine_.set();
  done_ = true;
  report_.bucket = set[bucket];
  report_.bucket_index = bucket;
  report_.rating = star_rating(set, set[bucket]);
  report_.samples_used = n_;
  report_.successes = successes_;
  report_.truncated = truncated;
  report_.hits.clear();
  if (engine_.tables()) {
    for (std::size_t j = 0; j < status_.size(); ++j) {
      report_.hits.push_back({engine_.tables()->thresholds()[j], status_[j], hit_n_[j]});
    }
  }
}

DecisionReport Decider::report() const {
  if (!done_) throw InvalidConfig("decider has not stopped");
  return report_;
}

}  // namespace mcb
