// Command-line front end: decide, boundaries, effort, probs, lowerbound, table2, screen.

#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "mcb/analysis.hpp"
#include "mcb/config.hpp"
#include "mcb/engine.hpp"
#include "mcb/errors.hpp"
#include "mcb/simctest.hpp"

using namespace mcb;

namespace {

// Flags bound to a scratch config; only those actually given override the base.
struct ConfigFlags {
  RunConfig flags;
  std::string config_path;
  std::string method = "simctest";
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> setters;

  template <class T>
  void add(CLI::App* app, const std::string& name, T RunConfig::*field, const std::string& help) {
    CLI::Option* opt = app->add_option(name, flags.*field, help);
    setters.emplace_back(opt, [this, field](RunConfig& c) { c.*field = flags.*field; });
  }

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file; explicit flags override it");
    add(app, "--buckets", &RunConfig::buckets, "Named set (J0, Jstar, Js, single) or bucket JSON file");
    CLI::Option* m = app->add_option("--method", method, "rl or simctest")->check(CLI::IsMember({"rl", "simctest"}));
    setters.emplace_back(m, [this](RunConfig& c) { c.method = parse_method(method); });
    add(app, "--eps", &RunConfig::eps, "Risk bound epsilon");
    add(app, "--rho", &RunConfig::rho, "Simctest per-threshold risk (default eps/2)");
    add(app, "--spending-k", &RunConfig::spending_k, "Spending sequence constant k");
    add(app, "--batch-b", &RunConfig::batch_b, "Initial batch size");
    add(app, "--batch-a", &RunConfig::batch_a, "Batch growth factor");
    add(app, "--seed", &RunConfig::seed, "Random seed");
    add(app, "--n-cap", &RunConfig::n_cap, "Sample cap for a single decision");
    add(app, "--grid", &RunConfig::grid, "Number of grid points");
    add(app, "--out", &RunConfig::out, "Output file (default stdout)");
  }

  bool given(const std::string& name) const {
    for (const auto& [opt, set] : setters) {
      if (opt->check_lname(name.substr(2)) && opt->count() > 0) return true;
    }
    return false;
  }

  RunConfig resolve() const {
    RunConfig c;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw InvalidConfig("cannot read config file " + config_path);
      std::stringstream buf;
      buf << in.rdbuf();
      c = config_from_json(buf.str());
    }
    for (const auto& [opt, set] : setters) {
      if (opt->count() > 0) set(c);
    }
    return c;
  }
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InvalidConfig("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

double simctest_rho(const RunConfig& c) { return c.rho > 0.0 ? c.rho : c.eps / 2.0; }

int cmd_decide(const RunConfig& c, double p, const std::string& stream_path, const std::string& record_path) {
  const BucketSet set = load_bucket_set(c.buckets);
  const Engine engine(set, c.engine_options());
  std::unique_ptr<ExceedanceStream> source;
  std::ifstream recorded;
  if (!stream_path.empty()) {
    recorded.open(stream_path);
    if (!recorded) throw InvalidConfig("cannot read stream file " + stream_path);
    source = std::make_unique<RecordedStream>(recorded);
  } else {
    if (p < 0.0) throw InvalidConfig("decide needs --p or --stream");
    source = std::make_unique<BernoulliStream>(p, c.seed);
  }
  std::ofstream record;
  std::unique_ptr<RecordingStream> recorder;
  ExceedanceStream* stream = source.get();
  if (!record_path.empty()) {
    record.open(record_path);
    if (!record) throw InvalidConfig("cannot write " + record_path);
    recorder = std::make_unique<RecordingStream>(*source, record);
    stream = recorder.get();
  }
  const DecisionReport report = engine.run(*stream);
  Output out(c.out);
  out.stream() << report_to_json(report) << '\n';
  return report.truncated ? 2 : 0;
}

int cmd_boundaries(const RunConfig& c, double alpha, std::int64_t n) {
  const double rho = c.rho > 0.0 ? c.rho : 5e-4;
  const auto table = build_boundaries(alpha, SpendingSequence::standard(rho, c.spending_k), n, c.schedule());
  Output out(c.out);
  write_boundary_csv(out.stream(), *table, table->size());
  return 0;
}

int cmd_effort(const RunConfig& c) {
  const BucketSet set = load_bucket_set(c.buckets);
  const RlRule rl(set, c.eps, c.schedule());
  const SimctestTables tables(set, SpendingSequence::standard(simctest_rho(c), c.spending_k), c.schedule());
  const SimctestRule sim(set, tables);
  const auto rows = effort_curve(uniform_grid(static_cast<std::size_t>(c.grid)), rl, sim, {c.eps, 1e-3});
  Output out(c.out);
  write_effort_csv(out.stream(), rows);
  return 0;
}

int cmd_probs(const RunConfig& c) {
  const BucketSet set = load_bucket_set(c.buckets);
  const auto grid = uniform_grid(static_cast<std::size_t>(c.grid));
  ProbCurve curve;
  if (c.method == Method::rl) {
    const RlRule rl(set, c.eps, c.schedule());
    curve = decision_curve(grid, rl);
  } else {
    const SimctestTables tables(set, SpendingSequence::standard(simctest_rho(c), c.spending_k), c.schedule());
    const SimctestRule sim(set, tables);
    curve = decision_curve(grid, sim);
  }
  Output out(c.out);
  write_prob_csv(out.stream(), curve);
  return 0;
}

int cmd_lowerbound(const RunConfig& c, double delta) {
  const BucketSet set = load_bucket_set(c.buckets);
  Output out(c.out);
  out.stream() << "p,lower_basic,lower_improved\n";
  char buf[128];
  for (double p : uniform_grid(static_cast<std::size_t>(c.grid))) {
    std::snprintf(buf, sizeof buf, "%.17g,%.10g,%.10g\n", p, lower_bound_basic(p, set, c.eps),
                  lower_bound_improved(p, set, {c.eps, delta}));
    out.stream() << buf;
  }
  return 0;
}

int cmd_table2(const RunConfig& c) {
  const Table2 t = table2(c.eps, c.spending_k);
  Output out(c.out);
  write_table2_csv(out.stream(), t);
  return 0;
}

int cmd_screen(const RunConfig& c, const ScreenSpec& spec, bool default_schedule, bool default_cap) {
  const BucketSet set = load_bucket_set(c.buckets);
  const BatchSchedule schedule = default_schedule ? BatchSchedule{10, 1.1} : c.schedule();
  // Alternatives far below 1e-7 need around 1e8 samples or more.
  const std::int64_t n_cap = default_cap ? 100'000'000'000LL : c.n_cap;
  const ScreenReport report = screen(spec, set, c.eps, schedule, c.seed, n_cap);
  std::cout << screen_summary_json(report) << '\n';
  if (!c.out.empty()) {
    Output out(c.out);
    write_screen_csv(out.stream(), report);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential bucket decisions for Monte Carlo p-values"};
  app.require_subcommand(1);
  bool print_config = false;
  app.add_flag("--print-config", print_config, "Print the resolved config as JSON and exit");

  struct Command {
    CLI::App* app;
    ConfigFlags flags;
  };
  std::vector<std::unique_ptr<Command>> commands;
  auto command = [&](const std::string& name, const std::string& help) {
    auto cmd = std::make_unique<Command>();
    cmd->app = app.add_subcommand(name, help);
    cmd->flags.attach(cmd->app);
    commands.push_back(std::move(cmd));
    return commands.back().get();
  };

  Command* decide = command("decide", "Decide the bucket of one p-value from a sample stream");
  double p = -1.0;
  std::string stream_path, record_path;
  decide->app->add_option("--p", p, "Bernoulli probability of the simulated stream");
  decide->app->add_option("--stream", stream_path, "Recorded stream file (batch_size,exceedances lines)");
  decide->app->add_option("--record", record_path, "Write the consumed batches to this file");

  Command* boundaries = command("boundaries", "Export Simctest stopping boundaries as CSV");
  double alpha = 0.05;
  std::int64_t rows = 1000;
  boundaries->app->add_option("--alpha", alpha, "Threshold")->required();
  boundaries->app->add_option("--n", rows, "Largest sample count to include");

  Command* effort = command("effort", "Expected effort and lower bounds on a p grid (CSV)");
  Command* probs = command("probs", "Decision probabilities per rating code on a p grid (CSV)");
  Command* lowerbound = command("lowerbound", "Basic and improved lower bounds on a p grid (CSV)");
  double delta = 1e-3;
  lowerbound->app->add_option("--delta", delta, "Grid width for eta");
  Command* t2 = command("table2", "Integrated effort under H0, H1a, H1b (CSV)");
  Command* scr = command("screen", "Screening experiment (defaults: --batch-b 10 --batch-a 1.1 --n-cap 1e11)");
  ScreenSpec spec;
  scr->app->add_option("--hypotheses", spec.hypotheses, "Number of hypotheses");
  scr->app->add_option("--alternatives", spec.alternatives, "Number of false nulls");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    for (const auto& cmd : commands) {
      if (!cmd->app->parsed()) continue;
      const RunConfig c = cmd->flags.resolve();
      if (print_config) {
        std::cout << config_to_json(c) << '\n';
        return 0;
      }
      if (cmd.get() == decide) return cmd_decide(c, p, stream_path, record_path);
      if (cmd.get() == boundaries) return cmd_boundaries(c, alpha, rows);
      if (cmd.get() == effort) return cmd_effort(c);
      if (cmd.get() == probs) return cmd_probs(c);
      if (cmd.get() == lowerbound) return cmd_lowerbound(c, delta);
      if (cmd.get() == t2) return cmd_table2(c);
      if (cmd.get() == scr) {
        const bool no_file = cmd->flags.config_path.empty();
        const bool default_schedule = no_file && !cmd->flags.given("--batch-b") && !cmd->flags.given("--batch-a");
        const bool default_cap = no_file && !cmd->flags.given("--n-cap");
        return cmd_screen(c, spec, default_schedule, default_cap);
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
