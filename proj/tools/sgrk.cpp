// Command-line front end. Exit codes: 0 realizable / ok, 1 unrealizable /
// violation, 2 error.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "sgrk/adapter.hpp"
#include "sgrk/bench.hpp"
#include "sgrk/error.hpp"
#include "sgrk/grk.hpp"
#include "sgrk/ltl.hpp"
#include "sgrk/oracle.hpp"
#include "sgrk/random_games.hpp"
#include "sgrk/strategy_io.hpp"

using namespace sgrk;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string read_input(const std::string& path) {
  std::stringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path);
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::io, "failed writing " + path);
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("SGRK_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw Error(ErrorKind::invalid_argument, std::string("SGRK_SEED is not a number: ") + s);
    }
  }
  return 0;
}

struct Report {
  json j;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  Report(const std::string& command, const std::string& spec) {
    j["schema"] = "sgrk-report-1";
    j["command"] = command;
    j["spec"] = spec;
  }
  void add_game(const SymbolicGame& g) {
    j["variables"] = g.var_count();
    j["N"] = g.state_space_size();
    j["phi"] = g.spec.phi_size();
  }
  void add_solve(const SolveResult& r) {
    j["realizable"] = r.realizable;
    j["ops_used"] = r.ops;
    j["iterations"] = r.weak_buchi.iterations;
    j["reach_iterations"] = r.reach_iterations;
  }
  void emit(bool as_json) {
    j["wall_time_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (as_json) {
      std::cout << j.dump() << '\n';
      return;
    }
    for (const auto& [k, v] : j.items()) {
      if (k != "schema") std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
  }
};

CompileOptions compile_options(bool reorder) {
  CompileOptions o;
  o.auto_reorder = reorder;
  return o;
}

std::uint64_t env_region_size(const SymbolicGame& g, const dd::Bdd& win) {
  return g.mgr->sat_count(!win, g.cur);
}

void dump_dd(const fs::path& dir, const SymbolicGame& g, const SolveResult& r) {
  fs::create_directories(dir);
  std::vector<std::pair<std::string, dd::Bdd>> roots{{"win", r.win}, {"acc", r.acc.acc}, {"fb", r.weak_buchi.fb}};
  if (r.controller) {
    const auto& t = r.controller->travel();
    for (std::size_t j = 0; j < t.reach.size(); ++j) roots.emplace_back("travel_" + std::to_string(j), t.reach[j]);
  }
  for (const auto& [name, bdd] : roots) write_output((dir / (name + ".dot")).string(), g.mgr->to_dot(bdd, name));
}

std::vector<std::vector<bool>> read_script(const std::string& path, std::size_t width) {
  std::vector<std::vector<bool>> out;
  std::istringstream in(read_input(path));
  for (std::string w; in >> w;) {
    if (w.size() != width || w.find_first_not_of("01") != std::string::npos) {
      throw Error(ErrorKind::syntax, "script entry '" + w + "' is not a " + std::to_string(width) + "-bit input");
    }
    out.push_back(from_bits(w));
  }
  return out;
}

// One random-suite instance: symbolic winning set versus explicit induction.
bool suite_instance(std::uint64_t seed, bool weak_buchi) {
  if (!weak_buchi) {
    SpecModel spec = random_separated_grk(seed);
    SymbolicGame g = build_game(spec);
    SolveResult r = solve(g);
    ExplicitGame eg = enumerate_game(spec, std::size_t{1} << 20);
    return solve_backward(eg, grk_acc_labels(eg, spec)) == explicit_set(eg, *g.mgr, g.cur, r.win);
  }
  RandomWeakBuchi rw = random_weak_buchi(seed, seed % 2 == 0);
  CompileOptions co;
  co.allow_non_separated = !rw.separated;
  SymbolicGame g = build_game(rw.spec, co);
  WeakBuchiSolution sol = solve_weak_buchi(g, to_bdd(*g.mgr, rw.acc));
  ExplicitGame eg = enumerate_game(rw.spec, std::size_t{1} << 20);
  std::vector<bool> states = explicit_set(eg, *g.mgr, g.cur, to_bdd(*g.mgr, rw.acc));
  return solve_backward(eg, acc_labels_from_states(eg, states)) == explicit_set(eg, *g.mgr, g.cur, sol.win);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Separated GR(k) realizability and synthesis"};
  app.require_subcommand(1);
  bool as_json = false, reorder = false;
  app.add_flag("--json", as_json, "Print a machine-readable report");
  app.add_flag("--reorder", reorder, "Enable dynamic variable reordering");

  std::string spec_path, out_path, strat_path, dump_dir, env_mode = "random", script_path;
  std::size_t steps = 100, cap = kDefaultStateBudget, n = 1, m = 2, count = 100, jobs = 1;
  std::uint64_t seed = 0;
  std::string family, target_path, adaptee_path, bench_out, ltl_out, adapter_out;

  auto* check = app.add_subcommand("check", "Decide realizability");
  check->add_option("spec", spec_path, "Specification (.sgrk, '-' for stdin)")->required();

  auto* synth = app.add_subcommand("synth", "Synthesize a controller");
  synth->add_option("spec", spec_path, "Specification (.sgrk, '-' for stdin)")->required();
  synth->add_option("-o,--output", out_path, "Strategy file (stratjson)");
  synth->add_option("--dump-dd", dump_dir, "Write DOT dumps of the solution diagrams into this directory");

  auto* simulate_cmd = app.add_subcommand("simulate", "Replay a strategy against an environment");
  simulate_cmd->add_option("spec", spec_path, "Specification")->required();
  simulate_cmd->add_option("strategy", strat_path, "Strategy file (stratjson)")->required();
  simulate_cmd->add_option("--env", env_mode, "random, adversarial or script")
      ->check(CLI::IsMember({"random", "adversarial", "script"}));
  simulate_cmd->add_option("--script", script_path, "Input bitstrings, whitespace separated");
  simulate_cmd->add_option("--steps", steps, "Number of steps");
  simulate_cmd->add_option("--seed", seed, "Random seed (default $SGRK_SEED or 0)");

  auto* oracle_cmd = app.add_subcommand("oracle", "Solve by explicit enumeration and compare");
  oracle_cmd->add_option("spec", spec_path, "Specification")->required();
  oracle_cmd->add_option("--cap", cap, "State budget");

  auto* bench = app.add_subcommand("bench", "Generate a benchmark specification");
  bench->add_option("family", family, "multimode, cleaning or railways")
      ->required()
      ->check(CLI::IsMember({"multimode", "cleaning", "railways"}));
  bench->add_option("-n", n, "Size parameter")->required();
  bench->add_option("-m", m, "Railways frequency parameter");
  bench->add_option("-o,--output", bench_out, "Output file ('-' for stdout)")->default_val("-");

  auto* export_cmd = app.add_subcommand("export-ltl", "Export the strict-semantics LTL formula");
  export_cmd->add_option("spec", spec_path, "Specification")->required();
  export_cmd->add_option("-o,--output", ltl_out, "Output file ('-' for stdout)")->default_val("-");

  auto* adapter_cmd = app.add_subcommand("adapter", "Build an adapter transducer");
  adapter_cmd->add_option("--target", target_path, "Target transducer (.tx)")->required();
  adapter_cmd->add_option("--adaptee", adaptee_path, "Adaptee transducer (.tx)")->required();
  adapter_cmd->add_option("--grk", spec_path, "Specification supplying variables and the GR(k) condition")
      ->required();
  adapter_cmd->add_option("-o,--output", adapter_out, "Adapter transducer ('-' for stdout)")->default_val("-");

  auto* suite = app.add_subcommand("suite", "Random oracle-equivalence suite");
  suite->add_option("--count", count, "Instances per suite");
  suite->add_option("--seed", seed, "First seed (default $SGRK_SEED or 0)");
  suite->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate_cmd->parsed() && simulate_cmd->count("--seed") == 0) seed = default_seed();
    if (suite->parsed() && suite->count("--seed") == 0) seed = default_seed();

    if (check->parsed() || synth->parsed()) {
      Report report(check->parsed() ? "check" : "synth", spec_path);
      if (synth->parsed() && out_path.empty() && dump_dir.empty()) {
        throw Error(ErrorKind::invalid_argument, "synth needs -o or --dump-dd");
      }
      SymbolicGame g = parse_game(read_input(spec_path), compile_options(reorder));
      SolveOptions so;
      so.synthesize = synth->parsed();
      SolveResult r = solve(g, so);
      report.add_game(g);
      report.add_solve(r);
      if (!r.realizable) report.j["environment_region"] = env_region_size(g, r.win);
      if (synth->parsed() && r.realizable) {
        if (!dump_dir.empty()) {
          dump_dd(dump_dir, g, r);
          report.j["dump_dd"] = dump_dir;
        }
        if (!out_path.empty()) {
          StrategyTable t = tabulate(*r.controller);
          write_output(out_path, write_stratjson(t));
          report.j["strategy_rows"] = t.rows.size();
          report.j["mem_bound"] = t.mem_bound;
        }
      }
      report.emit(as_json);
      return r.realizable ? 0 : 1;
    }

    if (simulate_cmd->parsed()) {
      SymbolicGame g = parse_game(read_input(spec_path), compile_options(reorder));
      StrategyTable t = read_stratjson(read_input(strat_path));
      SimulationOptions so;
      so.steps = steps;
      so.seed = seed;
      so.env = env_mode == "adversarial" ? EnvMode::adversarial : env_mode == "script" ? EnvMode::script : EnvMode::random;
      if (so.env == EnvMode::script) {
        if (script_path.empty()) throw Error(ErrorKind::invalid_argument, "--env script needs --script");
        so.script = read_script(script_path, g.in_cur.size());
      }
      SimulationResult res = simulate(g, t, so);
      Report report("simulate", spec_path);
      report.j["seed"] = seed;
      report.j["steps"] = res.trace.empty() ? 0 : res.trace.size() - 1;
      report.j["ok"] = res.ok;
      if (!res.ok) report.j["violation"] = res.violation;
      if (as_json) {
        json trace = json::array();
        for (const auto& s : res.trace) trace.push_back({{"mem", s.mem}, {"state", s.state}});
        report.j["trace"] = trace;
      } else {
        for (const auto& s : res.trace) std::cout << s.state << " mem=" << s.mem << '\n';
      }
      report.emit(as_json);
      return res.ok ? 0 : 1;
    }

    if (oracle_cmd->parsed()) {
      Report report("oracle", spec_path);
      SpecModel spec = parse_spec_text(read_input(spec_path));
      SymbolicGame g = compile(spec, compile_options(reorder));
      ExplicitGame eg = enumerate_game(spec, cap);
      std::vector<bool> w = solve_backward(eg, grk_acc_labels(eg, spec));
      bool realizable = explicit_realizable(eg, w);
      SolveResult r = solve(g);
      bool agree = w == explicit_set(eg, *g.mgr, g.cur, r.win);
      report.add_game(g);
      report.j["realizable"] = realizable;
      report.j["sccs"] = eg.scc_count();
      report.j["winning_states"] = std::count(w.begin(), w.end(), true);
      report.j["symbolic_agrees"] = agree;
      report.emit(as_json);
      if (!agree) throw Error(ErrorKind::internal, "symbolic and explicit winning sets differ");
      return realizable ? 0 : 1;
    }

    if (bench->parsed()) {
      write_output(bench_out, print_spec(gen_family(family, n, m)));
      return 0;
    }

    if (export_cmd->parsed()) {
      write_output(ltl_out, ltl::export_text(parse_spec_text(read_input(spec_path))));
      return 0;
    }

    if (adapter_cmd->parsed()) {
      Transducer target = parse_transducer(read_input(target_path));
      Transducer adaptee = parse_transducer(read_input(adaptee_path));
      SpecModel grk = parse_spec_text(read_input(spec_path));
      SymbolicGame g = compile(game_from_projections(project(target), project(adaptee), grk), compile_options(reorder));
      SolveResult r = solve(g);
      if (!r.realizable) {
        std::cerr << "unrealizable: no adapter exists\n";
        return 1;
      }
      write_output(adapter_out, print_transducer(assemble_adapter(target, adaptee, *r.controller)));
      return 0;
    }

    if (suite->parsed()) {
      Report report("suite", "");
      std::vector<std::uint64_t> failures;
      std::mutex lock;
      std::atomic<std::size_t> next{0};
      const std::size_t total = 2 * count;
      auto worker = [&] {
        for (std::size_t k; (k = next++) < total;) {
          std::uint64_t s = seed + k / 2;
          bool ok = suite_instance(s, k % 2 == 1);
          if (!ok) {
            std::lock_guard<std::mutex> guard(lock);
            failures.push_back(k);
          }
        }
      };
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
      std::sort(failures.begin(), failures.end());
      report.j["seed"] = seed;
      report.j["instances"] = total;
      json f = json::array();
      for (auto k : failures) f.push_back({{"seed", seed + k / 2}, {"kind", k % 2 ? "weak-buchi" : "grk"}});
      report.j["failures"] = f;
      report.emit(as_json);
      return failures.empty() ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
