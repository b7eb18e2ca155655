#include "mcb/config.hpp"

#include "json.hpp"
#include "mcb/errors.hpp"

namespace mcb {

EngineOptions RunConfig::engine_options() const {
  EngineOptions o;
  o.method = method;
  o.eps = eps;
  o.rho = rho;
  o.spending_k = spending_k;
  o.schedule = schedule();
  o.n_cap = n_cap;
  return o;
}

std::string config_to_json(const RunConfig& c) {
  nlohmann::ordered_json doc;
  doc["buckets"] = c.buckets;
  doc["method"] = to_string(c.method);
  doc["eps"] = c.eps;
  doc["rho"] = c.rho;
  doc["spending_k"] = c.spending_k;
  doc["batch_b"] = c.batch_b;
  doc["batch_a"] = c.batch_a;
  doc["seed"] = c.seed;
  doc["n_cap"] = c.n_cap;
  doc["grid"] = c.grid;
  doc["out"] = c.out;
  return doc.dump(2);
}

RunConfig config_from_json(const std::string& text) {
  RunConfig c;
  try {
    const auto doc = nlohmann::json::parse(text);
    if (!doc.is_object()) throw InvalidConfig("config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
      if (key == "buckets") c.buckets = value.get<std::string>();
      else if (key == "method") c.method = parse_method(value.get<std::string>());
      else if (key == "eps") c.eps = value.get<double>();
      else if (key == "rho") c.rho = value.get<double>();
      else if (key == "spending_k") c.spending_k = value.get<double>();
      else if (key == "batch_b") c.batch_b = value.get<std::int64_t>();
      else if (key == "batch_a") c.batch_a = value.get<double>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "n_cap") c.n_cap = value.get<std::int64_t>();
      else if (key == "grid") c.grid = value.get<std::int64_t>();
      else if (key == "out") c.out = value.get<std::string>();
      else throw InvalidConfig("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("bad config JSON: ") + e.what());
  }
  return c;
}

}  // namespace mcb
