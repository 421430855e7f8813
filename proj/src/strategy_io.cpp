#include "sgrk/strategy_io.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <random>
#include <set>

#include "json.hpp"

#include "sgrk/error.hpp"

namespace sgrk {

using json = nlohmann::json;

namespace {

bool key_less(const StrategyRow& a, const StrategyRow& b) {
  return std::tie(a.mem, a.state, a.input) < std::tie(b.mem, b.state, b.input);
}

bool holds(const SymbolicGame& g, const dd::Bdd& f, const std::vector<dd::VarId>& vars,
           const std::vector<bool>& values) {
  std::vector<bool> all(g.mgr->registry().var_count(), false);
  for (std::size_t k = 0; k < vars.size(); ++k) all[vars[k]] = values[k];
  return g.mgr->eval(f, all);
}

std::vector<bool> concat(std::vector<bool> a, const std::vector<bool>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

void check_bits(const std::string& bits, std::size_t width, const char* what) {
  if (bits.size() != width || bits.find_first_not_of("01") != std::string::npos) {
    throw Error(ErrorKind::syntax, std::string("stratjson: bad ") + what + " '" + bits + "'");
  }
}

}  // namespace

const StrategyRow* StrategyTable::find(std::size_t mem, const std::string& state, const std::string& input) const {
  StrategyRow key{mem, state, input, {}, 0};
  auto it = std::lower_bound(rows.begin(), rows.end(), key, key_less);
  if (it == rows.end() || key_less(key, *it)) return nullptr;
  return &*it;
}

const std::string* StrategyTable::initial_output(const std::string& input) const {
  for (const auto& [i, o] : initial) {
    if (i == input) return &o;
  }
  return nullptr;
}

std::vector<std::vector<bool>> legal_inputs(const SymbolicGame& g, const std::vector<bool>& state) {
  dd::Manager& m = *g.mgr;
  if (state.empty()) return m.enumerate(g.theta_i, g.in_cur, kMaxStrategyRows);
  return m.enumerate(m.cofactor(g.rho_i, g.cur, state), g.in_next, kMaxStrategyRows);
}

StrategyTable tabulate(const Controller& ctrl, std::size_t limit) {
  const SymbolicGame& g = ctrl.game();
  StrategyTable t;
  t.inputs = g.spec.inputs;
  t.outputs = g.spec.outputs;
  t.mem_bound = ctrl.mem_bound();

  std::set<std::pair<std::size_t, std::vector<bool>>> seen;
  std::deque<std::pair<std::size_t, std::vector<bool>>> queue;
  for (const auto& i : legal_inputs(g, {})) {
    std::vector<bool> o = ctrl.initial_output(i);
    t.initial.emplace_back(to_bits(i), to_bits(o));
    auto node = std::make_pair(std::size_t{0}, concat(i, o));
    if (seen.insert(node).second) queue.push_back(node);
  }
  while (!queue.empty()) {
    auto [mem, state] = queue.front();
    queue.pop_front();
    for (const auto& i : legal_inputs(g, state)) {
      Controller::Step s = ctrl.step(state, mem, i);
      if (t.rows.size() >= limit) {
        throw Error(ErrorKind::export_too_large,
                    "strategy table exceeds " + std::to_string(limit) + " rows; use --dump-dd instead");
      }
      t.rows.push_back({mem, to_bits(state), to_bits(i), to_bits(s.output), s.mem_next});
      auto node = std::make_pair(s.mem_next, concat(i, s.output));
      if (seen.insert(node).second) queue.push_back(std::move(node));
    }
  }
  std::sort(t.rows.begin(), t.rows.end(), key_less);
  return t;
}

std::string write_stratjson(const StrategyTable& t) {
  json header;
  header["format"] = "stratjson";
  header["version"] = 1;
  header["inputs"] = t.inputs;
  header["outputs"] = t.outputs;
  header["mem_bound"] = t.mem_bound;
  json init = json::array();
  for (const auto& [i, o] : t.initial) init.push_back({{"input", i}, {"output", o}});
  header["initial"] = init;
  // One row per line keeps large tables diffable.
  std::string out = header.dump();
  out.pop_back();
  out += ",\"rows\":[";
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const StrategyRow& r = t.rows[k];
    json row{{"mem", r.mem}, {"state", r.state}, {"input", r.input}, {"output", r.output}, {"mem_next", r.mem_next}};
    out += k ? ",\n" : "\n";
    out += row.dump();
  }
  out += "\n]}\n";
  return out;
}

StrategyTable read_stratjson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::syntax, std::string("stratjson: ") + e.what());
  }
  StrategyTable t;
  try {
    if (doc.at("format") != "stratjson" || doc.at("version") != 1) {
      throw Error(ErrorKind::syntax, "stratjson: unsupported format or version");
    }
    t.inputs = doc.at("inputs").get<std::vector<std::string>>();
    t.outputs = doc.at("outputs").get<std::vector<std::string>>();
    t.mem_bound = doc.at("mem_bound").get<std::size_t>();
    if (t.mem_bound == 0) throw Error(ErrorKind::syntax, "stratjson: mem_bound must be positive");
    const std::size_t ni = t.inputs.size(), no = t.outputs.size();
    for (const auto& e : doc.at("initial")) {
      t.initial.emplace_back(e.at("input").get<std::string>(), e.at("output").get<std::string>());
      check_bits(t.initial.back().first, ni, "initial input");
      check_bits(t.initial.back().second, no, "initial output");
    }
    for (const auto& r : doc.at("rows")) {
      StrategyRow row{r.at("mem").get<std::size_t>(), r.at("state").get<std::string>(),
                      r.at("input").get<std::string>(), r.at("output").get<std::string>(),
                      r.at("mem_next").get<std::size_t>()};
      check_bits(row.state, ni + no, "state");
      check_bits(row.input, ni, "input");
      check_bits(row.output, no, "output");
      if (row.mem >= t.mem_bound || row.mem_next >= t.mem_bound) {
        throw Error(ErrorKind::syntax, "stratjson: memory value out of range");
      }
      t.rows.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::syntax, std::string("stratjson: ") + e.what());
  }
  std::sort(t.rows.begin(), t.rows.end(), key_less);
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    if (!key_less(t.rows[k - 1], t.rows[k])) throw Error(ErrorKind::syntax, "stratjson: duplicate row");
  }
  return t;
}

SimulationResult simulate(const SymbolicGame& g, const StrategyTable& t, const SimulationOptions& opt) {
  if (t.inputs != g.spec.inputs || t.outputs != g.spec.outputs) {
    throw Error(ErrorKind::invalid_argument, "strategy variables do not match the specification");
  }
  SimulationResult res;
  std::mt19937_64 rng(opt.seed);
  std::vector<dd::Bdd> guarantees;
  for (const auto& conj : g.guarantees) guarantees.insert(guarantees.end(), conj.begin(), conj.end());

  auto fail = [&](std::string why) {
    res.ok = false;
    res.violation = std::move(why);
    return res;
  };
  auto pick = [&](const std::vector<std::vector<bool>>& options) { return options[rng() % options.size()]; };

  std::size_t script_pos = 0;
  auto next_scripted = [&]() -> std::optional<std::vector<bool>> {
    if (script_pos >= opt.script.size()) return std::nullopt;
    return opt.script[script_pos++];
  };

  std::vector<bool> input;
  if (opt.env == EnvMode::script) {
    auto i = next_scripted();
    if (!i) throw Error(ErrorKind::invalid_argument, "empty input script");
    input = *i;
    if (input.size() != g.in_cur.size()) throw Error(ErrorKind::invalid_argument, "script input has the wrong width");
    if (!holds(g, g.theta_i, g.in_cur, input)) {
      throw Error(ErrorKind::illegal_input, "scripted initial input " + to_bits(input) + " violates INIT_ENV");
    }
  } else {
    auto options = legal_inputs(g, {});
    if (options.empty()) return res;
    input = pick(options);
  }
  const std::string* o0 = t.initial_output(to_bits(input));
  if (!o0) return fail("no initial output for input " + to_bits(input));
  std::vector<bool> state = concat(input, from_bits(*o0));
  if (!holds(g, g.theta_o, g.cur, state)) return fail("initial state " + to_bits(state) + " violates INIT_SYS");
  std::size_t mem = 0;
  res.trace.push_back({mem, to_bits(state), to_bits(input), *o0});

  for (std::size_t step = 0; step < opt.steps; ++step) {
    std::vector<std::vector<bool>> options = legal_inputs(g, state);
    if (options.empty()) break;
    std::vector<bool> next_in;
    if (opt.env == EnvMode::script) {
      auto i = next_scripted();
      if (!i) break;
      next_in = *i;
      if (std::find(options.begin(), options.end(), next_in) == options.end()) {
        throw Error(ErrorKind::illegal_input,
                    "scripted input " + to_bits(next_in) + " is illegal at state " + to_bits(state));
      }
    } else if (opt.env == EnvMode::adversarial) {
      // Inputs whose reply makes the least guarantee progress.
      std::vector<std::vector<bool>> worst;
      std::size_t best = SIZE_MAX;
      for (const auto& i : options) {
        const StrategyRow* row = t.find(mem, to_bits(state), to_bits(i));
        std::size_t progress = 0;
        if (row) {
          for (const dd::Bdd& gar : guarantees) progress += holds(g, gar, g.out_cur, from_bits(row->output));
        }
        if (progress < best) {
          best = progress;
          worst.clear();
        }
        if (progress == best) worst.push_back(i);
      }
      next_in = pick(worst);
    } else {
      next_in = pick(options);
    }
    const StrategyRow* row = t.find(mem, to_bits(state), to_bits(next_in));
    if (!row) {
      return fail("no strategy row for mem " + std::to_string(mem) + ", state " + to_bits(state) + ", input " +
                  to_bits(next_in));
    }
    std::vector<bool> out = from_bits(row->output);
    std::vector<dd::VarId> vars = g.cur;
    vars.insert(vars.end(), g.in_next.begin(), g.in_next.end());
    vars.insert(vars.end(), g.out_next.begin(), g.out_next.end());
    if (!holds(g, g.rho_o, vars, concat(concat(state, next_in), out))) {
      return fail("output " + row->output + " violates TRANS_SYS at state " + to_bits(state) + " with input " +
                  to_bits(next_in));
    }
    state = concat(next_in, out);
    mem = row->mem_next;
    res.trace.push_back({mem, to_bits(state), to_bits(next_in), row->output});
  }
  return res;
}

}  // namespace sgrk
