// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "sgrk/adapter.hpp"
#include "sgrk/bench.hpp"
#include "sgrk/error.hpp"
#include "sgrk/grk.hpp"
#include "sgrk/oracle.hpp"
#include "sgrk/random_games.hpp"
#include "sgrk/spec.hpp"
#include "sgrk/strategy_io.hpp"

using namespace sgrk;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Outcome {
  bool ok = true;
  std::string detail;
};

void report(int n, const Outcome& o) {
  std::cout << "criterion " << n << ": " << (o.ok ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
}

// Per-instance findings from the random suites.
struct InstanceResult {
  bool grk = true;
  bool separated = true;
  bool agree = false;
  bool delay_ok = true;
  bool saturated = true;
  bool realizable = false;
  bool controller_ok = true;
  bool spoiling_ok = false;
  bool mutation_tried = false;
  bool mutation_detected = false;
  std::string error;
};

// Removes each winning state in turn until the delay check objects.
bool some_mutation_detected(const ExplicitGame& eg, const std::vector<bool>& win) {
  for (std::uint32_t s = 0; s < eg.num_states; ++s) {
    if (!win[s]) continue;
    std::vector<bool> m = win;
    m[s] = false;
    if (check_delay_property(eg, m)) return true;
  }
  return false;
}

InstanceResult run_instance(std::uint64_t seed, bool grk) {
  InstanceResult res;
  res.grk = grk;
  try {
    if (grk) {
      SpecModel spec = random_separated_grk(seed);
      SymbolicGame g = build_game(spec);
      SolveResult r = solve(g);
      ExplicitGame eg = enumerate_game(spec, std::size_t{1} << 20);
      std::vector<bool> labels = grk_acc_labels(eg, spec);
      std::vector<bool> win = solve_backward(eg, labels);
      res.agree = win == explicit_set(eg, *g.mgr, g.cur, r.win);
      res.delay_ok = !check_delay_property(eg, win).has_value();
      res.saturated = !saturation_violation(eg, win).has_value();
      res.realizable = r.realizable;
      if (r.realizable != explicit_realizable(eg, win)) res.agree = false;
      if (r.realizable) res.controller_ok = model_check_controller(eg, spec, *r.controller).ok;
      res.spoiling_ok = check_env_spoiling(eg, win, solve_env_backward(eg, labels)).ok;
      if (seed % 10 == 0) {
        res.mutation_tried = true;
        res.mutation_detected = some_mutation_detected(eg, win);
      }
    } else {
      RandomWeakBuchi rw = random_weak_buchi(seed, seed % 2 == 0);
      res.separated = rw.separated;
      CompileOptions co;
      co.allow_non_separated = !rw.separated;
      SymbolicGame g = build_game(rw.spec, co);
      dd::Bdd acc = to_bdd(*g.mgr, rw.acc);
      WeakBuchiSolution sol = solve_weak_buchi(g, acc);
      ExplicitGame eg = enumerate_game(rw.spec, std::size_t{1} << 20);
      std::vector<bool> labels = acc_labels_from_states(eg, explicit_set(eg, *g.mgr, g.cur, acc));
      std::vector<bool> win = solve_backward(eg, labels);
      res.agree = win == explicit_set(eg, *g.mgr, g.cur, sol.win);
      res.separated = eg.separated;
      if (eg.separated) res.delay_ok = !check_delay_property(eg, win).has_value();
      res.saturated = !saturation_violation(eg, win).has_value();
      res.spoiling_ok = check_env_spoiling(eg, win, solve_env_backward(eg, labels)).ok;
    }
  } catch (const std::exception& e) {
    res.error = e.what();
    res.agree = false;
  }
  return res;
}

std::vector<InstanceResult> run_suites(std::uint64_t base, std::size_t count, double* secs) {
  auto t0 = Clock::now();
  std::vector<InstanceResult> out(2 * count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < out.size();) {
      bool grk = k < count;
      out[k] = run_instance(base + (grk ? k : k - count), grk);
    }
  };
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  *secs = seconds_since(t0);
  return out;
}

struct GridPoint {
  std::string family;
  std::size_t n, m;
  std::string label() const {
    return family + "(" + std::to_string(n) + (family == "railways" ? "," + std::to_string(m) : "") + ")";
  }
};

std::vector<GridPoint> grid() {
  std::vector<GridPoint> g;
  for (std::size_t n = 1; n <= 8; ++n) g.push_back({"multimode", n, 2});
  for (std::size_t n = 1; n <= 6; ++n) g.push_back({"cleaning", n, 2});
  for (std::size_t n = 2; n <= 5; ++n) {
    for (std::size_t m : {2, 3}) g.push_back({"railways", n, m});
  }
  return g;
}

std::string fmt(double v, int prec = 3) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << v;
  return os.str();
}

// Criterion 9 helpers: the target's run on prefix . loop^k is defined for all k.
bool target_accepts(const Transducer& t, const std::vector<std::string>& prefix, const std::vector<std::string>& loop) {
  std::string s = t.initial;
  for (const auto& x : prefix) {
    const Transition* tr = t.step(s, x);
    if (!tr) return false;
    s = tr->dst;
  }
  for (std::size_t rep = 0; rep <= t.states.size(); ++rep) {
    for (const auto& x : loop) {
      const Transition* tr = t.step(s, x);
      if (!tr) return false;
      s = tr->dst;
    }
  }
  return true;
}

void words(const std::vector<std::string>& alphabet, std::size_t len, std::vector<std::vector<std::string>>& out) {
  std::vector<std::string> w;
  std::function<void()> rec = [&] {
    if (w.size() == len) {
      out.push_back(w);
      return;
    }
    for (const auto& a : alphabet) {
      w.push_back(a);
      rec();
      w.pop_back();
    }
  };
  rec();
}

}  // namespace

int main() {
  std::uint64_t base = 0;
  if (const char* env = std::getenv("SGRK_SEED")) base = std::strtoull(env, nullptr, 10);
  const std::size_t count = 500;
  bool all = true;
  auto record = [&](int n, const Outcome& o) {
    report(n, o);
    all = all && o.ok;
  };

  double suite_secs = 0;
  std::vector<InstanceResult> suite = run_suites(base, count, &suite_secs);
  std::vector<const InstanceResult*> grk, wb;
  for (const auto& r : suite) (r.grk ? grk : wb).push_back(&r);

  // 1
  {
    std::size_t agree_grk = 0, agree_wb = 0;
    std::string first_error;
    for (auto* r : grk) agree_grk += r->agree;
    for (auto* r : wb) agree_wb += r->agree;
    for (const auto& r : suite) {
      if (!r.error.empty() && first_error.empty()) first_error = r.error;
    }
    Outcome o;
    o.ok = agree_grk == grk.size() && agree_wb == wb.size() && suite_secs < 300;
    o.detail = "GR(k) " + std::to_string(agree_grk) + "/" + std::to_string(grk.size()) + ", weak Buchi " +
               std::to_string(agree_wb) + "/" + std::to_string(wb.size()) + " agree, " + fmt(suite_secs, 1) + " s" +
               (first_error.empty() ? "" : ", first error: " + first_error);
    record(1, o);
  }

  // 2, 3, 10 share the grid.
  Outcome c2{true, ""}, c3{true, ""}, c10{true, ""};
  std::size_t grid_realizable = 0, grid_count_ok = 0, grid_roundtrip = 0;
  std::vector<std::string> timings, failures2, failures3, failures10;
  for (const GridPoint& p : grid()) {
    SpecModel spec = gen_family(p.family, p.n, p.m);
    if (spec.var_count() == expected_var_count(p.family, p.n, p.m)) {
      ++grid_count_ok;
    } else {
      failures3.push_back(p.label());
    }
    // Independent arithmetic for the counts.
    std::size_t want = p.family == "multimode"  ? 2 * p.n
                       : p.family == "cleaning" ? 4 * p.n + 1
                                                : (2 + 2 * ceil_log2(p.m)) * p.n;
    if (spec.var_count() != want) failures3.push_back(p.label());

    std::string text = print_spec(spec);
    auto t0 = Clock::now();
    SymbolicGame g = parse_game(text);
    SolveResult r = solve(g);
    double secs = seconds_since(t0);
    if (r.realizable) {
      ++grid_realizable;
    } else {
      failures2.push_back(p.label());
    }
    double limit = 0;
    if (p.family == "multimode" && p.n == 8) limit = 30;
    if (p.family == "cleaning" && p.n == 5) limit = 30;
    if (p.family == "railways" && p.n == 4 && p.m == 2) limit = 120;
    if (limit > 0) {
      timings.push_back(p.label() + " " + fmt(secs) + " s");
      if (secs >= limit) failures2.push_back(p.label() + " too slow");
    }

    bool rt = print_spec(parse_spec_text(text)) == text;
    if (rt && r.realizable) {
      std::string sj = write_stratjson(tabulate(*r.controller));
      rt = write_stratjson(read_stratjson(sj)) == sj;
    }
    if (rt) {
      ++grid_roundtrip;
    } else {
      failures10.push_back(p.label());
    }
  }
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
    return s;
  };
  const std::size_t grid_size = grid().size();
  c2.ok = failures2.empty();
  c2.detail = std::to_string(grid_realizable) + "/" + std::to_string(grid_size) + " realizable; " + join(timings) +
              (failures2.empty() ? "" : "; failing: " + join(failures2));
  c3.ok = failures3.empty();
  c3.detail = std::to_string(grid_count_ok) + "/" + std::to_string(grid_size) + " grid points exact" +
              (failures3.empty() ? "" : "; failing: " + join(failures3));
  c10.ok = failures10.empty();
  c10.detail = std::to_string(grid_roundtrip) + "/" + std::to_string(grid_size) + " byte-stable (spec and stratjson)" +
               (failures10.empty() ? "" : "; failing: " + join(failures10));
  record(2, c2);
  record(3, c3);

  // 4
  {
    std::size_t checked = 0, ok = 0, mutated = 0, detected = 0;
    for (const auto& r : suite) {
      if (!r.separated) continue;
      ++checked;
      ok += r.delay_ok;
    }
    for (auto* r : grk) {
      if (r->mutation_tried) {
        ++mutated;
        detected += r->mutation_detected;
      }
    }
    // Running example: dropping (01,00) breaks closure under the environment's move from (00,00).
    SpecModel modes = parse_spec_text(read_file(std::string(SGRK_DATA_DIR) + "/modes.sgrk"));
    ExplicitGame eg = enumerate_game(modes);
    std::vector<bool> win = solve_backward(eg, grk_acc_labels(eg, modes));
    std::vector<bool> m = win;
    m[0b0100] = false;
    bool example = check_delay_property(eg, m).has_value();
    Outcome o;
    o.ok = ok == checked && example && detected > 0;
    o.detail = std::to_string(ok) + "/" + std::to_string(checked) + " separated instances closed; mutation detected on " +
               "the running example: " + (example ? "yes" : "no") + ", on " + std::to_string(detected) + "/" +
               std::to_string(mutated) + " sampled random instances";
    record(4, o);
  }

  // 5
  {
    std::size_t checked = 0, ok = 0, general = 0, violators = 0;
    for (const auto& r : suite) {
      if (r.separated) {
        ++checked;
        ok += r.saturated;
      } else {
        ++general;
        violators += !r.saturated;
      }
    }
    Outcome o;
    o.ok = ok == checked && violators > 0;
    o.detail = std::to_string(ok) + "/" + std::to_string(checked) + " separated winning sets saturated; " +
               std::to_string(violators) + "/" + std::to_string(general) + " non-separated instances split an SCC";
    record(5, o);
  }

  // 6
  {
    std::size_t realizable = 0, ok = 0;
    for (auto* r : grk) {
      if (!r->realizable) continue;
      ++realizable;
      ok += r->controller_ok;
    }
    Outcome o;
    o.ok = realizable > 0 && ok == realizable;
    o.detail = std::to_string(ok) + "/" + std::to_string(realizable) + " realizable controllers pass model checking";
    record(6, o);
  }

  // 7
  {
    std::size_t ok = 0;
    for (const auto& r : suite) ok += r.spoiling_ok;
    Outcome o;
    o.ok = ok == suite.size();
    o.detail = std::to_string(ok) + "/" + std::to_string(suite.size()) + " instances partitioned exactly";
    record(7, o);
  }

  // 8
  {
    double first = 0, worst = 0;
    std::string profile;
    for (std::size_t n = 1; n <= 8; ++n) {
      SymbolicGame g = compile(gen_multimode(n));
      SolveOptions so;
      so.synthesize = false;
      SolveResult r = solve(g, so);
      double ratio = static_cast<double>(r.ops) / static_cast<double>(g.state_space_size());
      if (n == 1) first = ratio;
      worst = std::max(worst, ratio);
      profile += (n == 1 ? "" : " ") + fmt(ratio, 2);
    }
    Outcome o;
    o.ok = worst <= 10 * first;
    o.detail = "ops/N for n=1..8: " + profile;
    record(8, o);
  }

  // 9
  {
    const std::string dir = SGRK_DATA_DIR;
    Transducer target = parse_transducer(read_file(dir + "/target.tx"));
    Transducer adaptee = parse_transducer(read_file(dir + "/adaptee.tx"));
    SpecModel modes = parse_spec_text(read_file(dir + "/modes.sgrk"));
    TransitionSystem in = project(target), out = project(adaptee);
    using Edge = std::pair<std::string, std::string>;
    bool fig = in.states == std::set<std::string>{"00", "01", "10"} &&
               in.edges == std::set<Edge>{{"00", "01"}, {"00", "10"}, {"01", "01"}, {"10", "10"}} &&
               out.states == std::set<std::string>{"00", "01", "10"} &&
               out.edges == std::set<Edge>{{"00", "01"}, {"00", "10"}, {"01", "00"}, {"10", "10"}} &&
               in.initial == std::set<std::string>{"00"} && out.initial == std::set<std::string>{"00"};
    SymbolicGame g = compile(game_from_projections(in, out, modes));
    SolveResult r = solve(g);
    std::size_t lassos = 0, satisfied = 0;
    std::string first_failure;
    if (r.realizable) {
      Transducer adapter = assemble_adapter(target, adaptee, *r.controller);
      const std::set<std::string> symbols = target.input_alphabet();
      std::vector<std::string> alphabet(symbols.begin(), symbols.end());
      for (std::size_t pl = 0; pl <= 6; ++pl) {
        std::vector<std::vector<std::string>> prefixes;
        words(alphabet, pl, prefixes);
        for (std::size_t ll = 1; ll <= 6; ++ll) {
          std::vector<std::vector<std::string>> loops;
          words(alphabet, ll, loops);
          for (const auto& p : prefixes) {
            for (const auto& l : loops) {
              if (!target_accepts(target, p, l)) continue;
              ++lassos;
              try {
                if (cosimulate(target, adaptee, adapter, modes, p, l).satisfied) {
                  ++satisfied;
                  continue;
                }
              } catch (const std::exception& e) {
                if (first_failure.empty()) first_failure = e.what();
              }
              if (first_failure.empty()) first_failure = "conjunct violated";
            }
          }
        }
      }
    }
    Outcome o;
    o.ok = fig && r.realizable && lassos > 0 && satisfied == lassos;
    o.detail = std::string("projections ") + (fig ? "match" : "differ") + "; " + std::to_string(satisfied) + "/" +
               std::to_string(lassos) + " target lassos (prefix <= 6, cycle <= 6) satisfied" +
               (first_failure.empty() ? "" : "; " + first_failure);
    record(9, o);
  }

  record(10, c10);
  return all ? 0 : 1;
}
