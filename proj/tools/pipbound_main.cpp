// Command-line front end: parse a program, analyze it, simulate it, or do
// both and check that the inferred bounds dominate the simulation estimates.

#include <cstdio>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pipbound/driver.hpp"
#include "pipbound/parser.hpp"
#include "pipbound/sim.hpp"

namespace {

using namespace pipbound;

std::optional<PIP> load(const std::string& path) {
  try {
    PIP p = parse_pip_file(path);
    auto errs = p.validate();
    if (!errs.empty()) {
      for (auto& e : errs) std::cerr << "error: " << e << "\n";
      return std::nullopt;
    }
    return p;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return std::nullopt;
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void print_stats(const PIP& p, const SimStats& st, std::ostream& os) {
  os << "trials: " << st.trials << "\n";
  os << "completed: " << st.completed << "  cap_hits: " << st.cap_hits
     << "  faults: " << st.faults << "\n";
  os << "termination: " << fmt(st.termination_fraction) << "\n";
  for (auto& g : p.gts)
    os << "count(" << g.name() << "): mean=" << fmt(st.count_mean.at(g.id))
       << " se=" << fmt(st.count_se.at(g.id)) << "\n";
  for (auto& [a, m] : st.size_mean)
    os << "size" << a.str() << ": mean=" << fmt(m)
       << " se=" << fmt(st.size_se.at(a)) << "\n";
  os << "cost: mean=" << fmt(st.cost_mean) << " se=" << fmt(st.cost_se)
     << "\n";
}

State initial_state(const PIP& p, long long k) {
  State s;
  for (auto& v : p.pvars) s[v] = k;
  return s;
}

// Returns true when every inferred expected bound dominates the simulated
// estimate (mean minus 4 standard errors) at the initial state.
bool dominant(const AnalysisReport& rep, const SimStats& st, const State& s0,
              std::ostream& os) {
  bool ok = true;
  auto value_ok = [&](const Bound& b, double mean, double se) {
    BoundEval ev = b.eval_state(s0);
    if (ev.infinite) return true;
    return rat_double(ev.value) >= mean - 4.0 * se;
  };
  for (auto& g : rep.prog.gts) {
    const Bound& b = rep.rt_e.at(g.id);
    double mean = st.count_mean.at(g.id), se = st.count_se.at(g.id);
    if (!value_ok(b, mean, se)) {
      ok = false;
      os << "VIOLATION count(" << g.name() << "): bound " << b.str()
         << " < mean " << fmt(mean) << " - 4*" << fmt(se) << "\n";
    }
  }
  for (auto& [a, b] : rep.sz_e) {
    double mean = st.size_mean.at(a), se = st.size_se.at(a);
    if (!value_ok(b, mean, se)) {
      ok = false;
      os << "VIOLATION size" << a.str() << ": bound " << b.str() << " < mean "
         << fmt(mean) << " - 4*" << fmt(se) << "\n";
    }
  }
  return ok;
}

struct Options {
  std::string file;
  int rounds = 5;
  double timeout = 0;
  bool no_invariants = false;
  bool json = false;
  long long x0 = 0;
  long long trials = 10000;
  long long cap = 100000;
  uint64_t seed = 0;
  std::string scheduler = "first";

  SchedulerKind sched() const {
    return scheduler == "random" ? SchedulerKind::RandomEnabled
                                 : SchedulerKind::FirstEnabled;
  }
  AnalyzeConfig analyze_config() const {
    AnalyzeConfig cfg;
    cfg.max_rounds = rounds;
    cfg.timeout_secs = timeout;
    cfg.invariants = !no_invariants;
    return cfg;
  }
};

int cmd_analyze(const Options& o) {
  auto p = load(o.file);
  if (!p) return 1;
  AnalysisReport rep = analyze(*p, o.analyze_config());
  std::cout << (o.json ? render_json(rep) : render_text(rep));
  return rep.total.is_infinite() ? 2 : 0;
}

int cmd_simulate(const Options& o) {
  auto p = load(o.file);
  if (!p) return 1;
  Scheduler sch;
  sch.kind = o.sched();
  SimStats st =
      estimate(*p, initial_state(*p, o.x0), sch, o.trials, o.cap, o.seed);
  print_stats(*p, st, std::cout);
  return 0;
}

int cmd_check(const Options& o) {
  auto p = load(o.file);
  if (!p) return 1;
  AnalysisReport rep = analyze(*p, o.analyze_config());
  Scheduler sch;
  sch.kind = o.sched();
  // Simulate the preprocessed program so that transition ids line up with
  // the report.
  State s0 = initial_state(rep.prog, o.x0);
  SimStats st = estimate(rep.prog, s0, sch, o.trials, o.cap, o.seed);
  std::cout << "Total: " << rep.total.str() << "\n";
  std::cout << "Class: " << rep.cls().str() << "\n";
  bool ok = dominant(rep, st, s0, std::cout);
  std::cout << (ok ? "DOMINANCE OK" : "DOMINANCE FAIL") << "\n";
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Expected runtime and size bounds for probabilistic integer programs"};
  app.require_subcommand(1);
  Options o;

  auto add_file = [&](CLI::App* c) {
    c->add_option("file", o.file, "program file")->required();
  };
  auto add_analysis_flags = [&](CLI::App* c) {
    c->add_option("--rounds", o.rounds, "maximum improvement rounds")
        ->check(CLI::NonNegativeNumber);
    c->add_flag("--no-invariants", o.no_invariants,
                "skip interval invariant inference");
  };
  auto add_sim_flags = [&](CLI::App* c) {
    c->add_option("--x0", o.x0, "initial value of every program variable");
    c->add_option("--trials", o.trials, "number of trials")
        ->check(CLI::PositiveNumber);
    c->add_option("--seed", o.seed, "random seed");
    c->add_option("--scheduler", o.scheduler, "non-determinism policy")
        ->check(CLI::IsMember({"first", "random"}));
    c->add_option("--cap", o.cap, "per-trial step cap")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* an = app.add_subcommand("analyze", "infer expected bounds");
  add_file(an);
  add_analysis_flags(an);
  an->add_option("--timeout", o.timeout, "wall-clock budget in seconds");
  an->add_flag("--json", o.json, "machine-readable output");

  CLI::App* si = app.add_subcommand("simulate", "Monte-Carlo estimation");
  add_file(si);
  add_sim_flags(si);

  CLI::App* ck =
      app.add_subcommand("check", "analyze, simulate, verify dominance");
  add_file(ck);
  add_analysis_flags(ck);
  add_sim_flags(ck);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  }

  if (an->parsed()) return cmd_analyze(o);
  if (si->parsed()) return cmd_simulate(o);
  return cmd_check(o);
}
