#include "sgrk/adapter.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "sgrk/error.hpp"
#include "sgrk/random_games.hpp"

namespace sgrk {

namespace {

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool is_bits(const std::string& s, std::size_t width) {
  return s.size() == width && s.find_first_not_of("01") == std::string::npos;
}

[[noreturn]] void syntax(std::size_t line, const std::string& msg) {
  throw Error(ErrorKind::syntax, std::to_string(line) + ":1: " + msg);
}

std::uint64_t bits_value(const std::string& bits) {
  std::uint64_t v = 0;
  for (char c : bits) v = (v << 1) | (c == '1');
  return v;
}

}  // namespace

std::set<std::string> Transducer::input_alphabet() const {
  std::set<std::string> out;
  for (const auto& t : transitions) out.insert(t.input);
  return out;
}

std::set<std::string> Transducer::output_alphabet() const {
  std::set<std::string> out;
  for (const auto& t : transitions) out.insert(t.output);
  return out;
}

const Transition* Transducer::step(const std::string& state, const std::string& input) const {
  for (const auto& t : transitions) {
    if (t.src == state && t.input == input) return &t;
  }
  return nullptr;
}

Transducer parse_transducer(std::string_view text) {
  Transducer t;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto words = split_ws(line);
    if (words.empty()) continue;
    const std::string& kw = words[0];
    if (kw == "VARS:") {
      t.vars.assign(words.begin() + 1, words.end());
    } else if (kw == "STATE") {
      if (words.size() < 2 || words.size() > 3 || (words.size() == 3 && words[2] != "initial")) {
        syntax(no, "expected 'STATE name [initial]'");
      }
      if (std::find(t.states.begin(), t.states.end(), words[1]) != t.states.end()) {
        syntax(no, "duplicate state '" + words[1] + "'");
      }
      t.states.push_back(words[1]);
      if (words.size() == 3) {
        if (!t.initial.empty()) syntax(no, "second initial state");
        t.initial = words[1];
      }
    } else if (kw == "INIT_OUTPUT") {
      if (words.size() != 2) syntax(no, "expected 'INIT_OUTPUT label'");
      t.init_output = words[1];
    } else if (kw == "TRANS") {
      // TRANS src --in/out--> dst
      if (words.size() != 4 || words[2].size() < 6 || words[2].substr(0, 2) != "--" ||
          words[2].substr(words[2].size() - 3) != "-->") {
        syntax(no, "expected 'TRANS src --input/output--> dst'");
      }
      std::string label = words[2].substr(2, words[2].size() - 5);
      auto slash = label.find('/');
      if (slash == std::string::npos || slash == 0 || slash + 1 == label.size()) {
        syntax(no, "transition label must be input/output");
      }
      t.transitions.push_back({words[1], label.substr(0, slash), label.substr(slash + 1), words[3]});
    } else {
      syntax(no, "unknown keyword '" + kw + "'");
    }
  }
  check_and_trim(t);
  return t;
}

void check_and_trim(Transducer& t) {
  if (t.initial.empty()) throw Error(ErrorKind::invalid_argument, "transducer has no initial state");
  std::set<std::string> known(t.states.begin(), t.states.end());
  std::set<std::pair<std::string, std::string>> keys;
  for (const auto& tr : t.transitions) {
    if (!known.count(tr.src) || !known.count(tr.dst)) {
      throw Error(ErrorKind::invalid_argument, "transition refers to an unknown state");
    }
    if (!keys.insert({tr.src, tr.input}).second) {
      throw Error(ErrorKind::invalid_argument, "state " + tr.src + " has two transitions on input " + tr.input);
    }
    if (!t.vars.empty() && !is_bits(tr.output, t.vars.size())) {
      throw Error(ErrorKind::invalid_argument, "output '" + tr.output + "' does not match VARS");
    }
  }
  if (t.init_output && !t.vars.empty() && !is_bits(*t.init_output, t.vars.size())) {
    throw Error(ErrorKind::invalid_argument, "INIT_OUTPUT does not match VARS");
  }
  std::set<std::string> seen{t.initial};
  std::deque<std::string> queue{t.initial};
  while (!queue.empty()) {
    std::string s = queue.front();
    queue.pop_front();
    for (const auto& tr : t.transitions) {
      if (tr.src == s && seen.insert(tr.dst).second) queue.push_back(tr.dst);
    }
  }
  std::erase_if(t.states, [&](const std::string& s) { return !seen.count(s); });
  std::erase_if(t.transitions, [&](const Transition& tr) { return !seen.count(tr.src); });
}

std::string print_transducer(const Transducer& t) {
  std::ostringstream out;
  if (!t.vars.empty()) {
    out << "VARS:";
    for (const auto& v : t.vars) out << ' ' << v;
    out << '\n';
  }
  for (const auto& s : t.states) out << "STATE " << s << (s == t.initial ? " initial" : "") << '\n';
  if (t.init_output) out << "INIT_OUTPUT " << *t.init_output << '\n';
  for (const auto& tr : t.transitions) {
    out << "TRANS " << tr.src << " --" << tr.input << '/' << tr.output << "--> " << tr.dst << '\n';
  }
  return out.str();
}

TransitionSystem project(const Transducer& t) {
  if (t.vars.empty()) throw Error(ErrorKind::invalid_argument, "projection needs a transducer with VARS");
  TransitionSystem ts;
  ts.vars = t.vars;
  std::map<std::string, std::vector<const Transition*>> out_of;
  for (const auto& tr : t.transitions) {
    ts.states.insert(tr.output);
    out_of[tr.src].push_back(&tr);
  }
  if (t.init_output) {
    ts.states.insert(*t.init_output);
    ts.initial.insert(*t.init_output);
    for (const Transition* n : out_of[t.initial]) ts.edges.insert({*t.init_output, n->output});
  } else {
    for (const Transition* n : out_of[t.initial]) ts.initial.insert(n->output);
  }
  // Per label, the successor labels contributed by each transducer state.
  std::map<std::string, std::set<std::set<std::string>>> follow;
  for (const auto& tr : t.transitions) {
    std::set<std::string> next;
    for (const Transition* n : out_of[tr.dst]) {
      ts.edges.insert({tr.output, n->output});
      next.insert(n->output);
    }
    follow[tr.output].insert(next);
  }
  for (const auto& [label, sets] : follow) {
    if (sets.size() > 1) ts.collisions.push_back(label);
  }
  return ts;
}

SpecModel game_from_projections(const TransitionSystem& input, const TransitionSystem& output, const SpecModel& grk) {
  if (input.vars != grk.inputs || output.vars != grk.outputs) {
    throw Error(ErrorKind::alphabet_mismatch, "transition system variables do not match the specification");
  }
  auto side = [](const TransitionSystem& ts, ExprPtr& init, ExprPtr& trans) {
    std::vector<ExprPtr> inits, edges, valid;
    for (const auto& s : ts.initial) inits.push_back(minterm(ts.vars, bits_value(s)));
    for (const auto& [u, v] : ts.edges) {
      edges.push_back(mk_and({minterm(ts.vars, bits_value(u)), minterm(ts.vars, bits_value(v), true)}));
    }
    for (const auto& s : ts.states) valid.push_back(minterm(ts.vars, bits_value(s)));
    std::vector<ExprPtr> same;
    for (const auto& v : ts.vars) same.push_back(mk_iff(mk_var(v, true), mk_var(v)));
    edges.push_back(mk_and({mk_not(mk_or(std::move(valid))), mk_and(std::move(same))}));
    init = mk_or(std::move(inits));
    trans = mk_or(std::move(edges));
  };
  SpecModel s;
  s.inputs = grk.inputs;
  s.outputs = grk.outputs;
  side(input, s.init_env, s.trans_env);
  side(output, s.init_sys, s.trans_sys);
  s.conjuncts = grk.conjuncts;
  return s;
}

Transducer compose(const Transducer& f, const Transducer& g) {
  {
    std::set<std::string> fin = f.input_alphabet(), gout = g.output_alphabet();
    bool meet = gout.empty();
    for (const auto& sym : gout) meet = meet || fin.count(sym);
    if (!meet) throw Error(ErrorKind::alphabet_mismatch, "no output of the inner machine is an input of the outer one");
  }
  Transducer out;
  out.vars = f.vars;
  auto name = [](const std::string& a, const std::string& b) { return "(" + a + "," + b + ")"; };
  out.initial = name(g.initial, f.initial);
  if (g.init_output && f.init_output) out.init_output = f.init_output;
  std::set<std::pair<std::string, std::string>> seen{{g.initial, f.initial}};
  std::deque<std::pair<std::string, std::string>> queue{{g.initial, f.initial}};
  while (!queue.empty()) {
    auto [qg, qf] = queue.front();
    queue.pop_front();
    out.states.push_back(name(qg, qf));
    for (const auto& tg : g.transitions) {
      if (tg.src != qg) continue;
      const Transition* tf = f.step(qf, tg.output);
      if (!tf) continue;
      out.transitions.push_back({name(qg, qf), tg.input, tf->output, name(tg.dst, tf->dst)});
      if (seen.insert({tg.dst, tf->dst}).second) queue.push_back({tg.dst, tf->dst});
    }
  }
  return out;
}

Transducer invert(const Transducer& t) {
  std::set<std::pair<std::string, std::string>> keys;
  for (const auto& tr : t.transitions) {
    if (!keys.insert({tr.src, tr.output}).second) {
      throw Error(ErrorKind::not_invertible, "state " + tr.src + " emits '" + tr.output + "' on two inputs");
    }
  }
  Transducer out = t;
  out.vars.clear();
  out.init_output.reset();
  for (auto& tr : out.transitions) std::swap(tr.input, tr.output);
  return out;
}

bool isomorphic(const Transducer& a, const Transducer& b) {
  // Canonical numbering by breadth-first discovery along sorted inputs.
  auto canon = [](const Transducer& t) {
    std::map<std::string, std::size_t> id{{t.initial, 0}};
    std::deque<std::string> queue{t.initial};
    std::vector<std::tuple<std::size_t, std::string, std::string, std::size_t>> edges;
    while (!queue.empty()) {
      std::string s = queue.front();
      queue.pop_front();
      std::vector<const Transition*> out;
      for (const auto& tr : t.transitions) {
        if (tr.src == s) out.push_back(&tr);
      }
      std::sort(out.begin(), out.end(), [](auto* x, auto* y) { return x->input < y->input; });
      for (const Transition* tr : out) {
        if (!id.count(tr->dst)) {
          id.emplace(tr->dst, id.size());
          queue.push_back(tr->dst);
        }
        edges.emplace_back(id.at(s), tr->input, tr->output, id.at(tr->dst));
      }
    }
    std::sort(edges.begin(), edges.end());
    return std::make_pair(id.size(), edges);
  };
  return a.init_output == b.init_output && canon(a) == canon(b);
}

Transducer assemble_adapter(const Transducer& target, const Transducer& adaptee, const Controller& ctrl) {
  const SymbolicGame& g = ctrl.game();
  if (target.vars != g.spec.inputs || adaptee.vars != g.spec.outputs) {
    throw Error(ErrorKind::alphabet_mismatch, "transducer variables do not match the controller's game");
  }
  if (!target.init_output || !adaptee.init_output) {
    throw Error(ErrorKind::invalid_argument, "target and adaptee need INIT_OUTPUT");
  }
  Transducer inverse = invert(adaptee);

  struct Node {
    std::string qt, qa;
    std::string in, out;
    std::size_t mem;
    auto key() const { return std::tie(qt, qa, in, out, mem); }
    bool operator<(const Node& o) const { return key() < o.key(); }
  };
  auto name = [](const Node& n) {
    return "t:" + n.qt + "|c:" + n.in + n.out + "/" + std::to_string(n.mem) + "|a:" + n.qa;
  };

  std::string o0 = to_bits(ctrl.initial_output(from_bits(*target.init_output)));
  if (o0 != *adaptee.init_output) {
    throw Error(ErrorKind::controller_undefined,
                "controller's initial output " + o0 + " differs from the adaptee's initial output");
  }
  Node start{target.initial, adaptee.initial, *target.init_output, o0, 0};
  Transducer out;
  out.initial = name(start);
  std::map<Node, std::string> parent_trace{{start, ""}};
  std::deque<Node> queue{start};
  while (!queue.empty()) {
    Node n = queue.front();
    queue.pop_front();
    out.states.push_back(name(n));
    std::vector<const Transition*> moves;
    for (const auto& tr : target.transitions) {
      if (tr.src == n.qt) moves.push_back(&tr);
    }
    for (const Transition* tt : moves) {
      std::string trace = parent_trace.at(n) + " " + tt->input;
      Controller::Step s;
      try {
        s = ctrl.step(from_bits(n.in + n.out), n.mem, from_bits(tt->output));
      } catch (const Error& e) {
        throw Error(ErrorKind::controller_undefined, std::string(e.what()) + " after inputs:" + trace);
      }
      std::string o = to_bits(s.output);
      const Transition* ta = nullptr;
      for (const auto& tr : inverse.transitions) {
        if (tr.src == n.qa && tr.input == o) ta = &tr;
      }
      if (!ta) {
        throw Error(ErrorKind::controller_undefined,
                    "adaptee cannot emit " + o + " from state " + n.qa + " after inputs:" + trace);
      }
      Node next{tt->dst, ta->dst, tt->output, o, s.mem_next};
      out.transitions.push_back({name(n), tt->input, ta->output, name(next)});
      if (parent_trace.emplace(next, trace).second) queue.push_back(next);
    }
  }
  return out;
}

CosimResult cosimulate(const Transducer& target, const Transducer& adaptee, const Transducer& adapter,
                       const SpecModel& grk, const std::vector<std::string>& prefix,
                       const std::vector<std::string>& loop) {
  if (!target.init_output || !adaptee.init_output) {
    throw Error(ErrorKind::invalid_argument, "target and adaptee need INIT_OUTPUT");
  }
  CosimResult r;
  std::string qt = target.initial, qd = adapter.initial, qa = adaptee.initial;
  r.trace.emplace_back(*target.init_output, *adaptee.init_output);
  auto advance = [&](const std::string& sym) {
    const Transition* tt = target.step(qt, sym);
    const Transition* td = adapter.step(qd, sym);
    if (!tt || !td) throw Error(ErrorKind::illegal_input, "input " + sym + " is illegal for the target or adapter");
    const Transition* ta = adaptee.step(qa, td->output);
    if (!ta) throw Error(ErrorKind::illegal_input, "adapter command " + td->output + " is illegal for the adaptee");
    qt = tt->dst;
    qd = td->dst;
    qa = ta->dst;
    r.trace.emplace_back(tt->output, ta->output);
  };
  for (const auto& sym : prefix) advance(sym);
  if (loop.empty()) {
    r.cycle_start = r.trace.size();
    return r;
  }
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> boundary;
  while (true) {
    auto key = std::make_tuple(qt, qd, qa);
    if (auto it = boundary.find(key); it != boundary.end()) {
      r.cycle_start = it->second;
      break;
    }
    boundary.emplace(key, r.trace.size() - 1);
    for (const auto& sym : loop) advance(sym);
  }
  // Entries after cycle_start repeat forever.
  const std::size_t cycle_end = r.trace.size();

  std::vector<std::string> vars = grk.inputs;
  vars.insert(vars.end(), grk.outputs.begin(), grk.outputs.end());
  auto slot = [&](const Atom& a) -> std::size_t {
    if (a.primed) throw Error(ErrorKind::invalid_argument, "primed atom in a GR(k) assertion");
    auto it = std::find(vars.begin(), vars.end(), a.name);
    if (it == vars.end()) throw Error(ErrorKind::unknown_variable, "unknown variable '" + a.name + "'");
    return static_cast<std::size_t>(it - vars.begin());
  };
  auto count = [&](const ExprPtr& e) {
    CompiledExpr c(e, slot);
    std::size_t hits = 0;
    for (std::size_t k = r.cycle_start + 1; k < cycle_end; ++k) {
      hits += c.eval(from_bits(r.trace[k].first + r.trace[k].second));
    }
    return hits;
  };
  for (const auto& conj : grk.conjuncts) {
    ConjunctTally t;
    bool assumed = true, guaranteed = true;
    for (const auto& a : conj.assumptions) {
      t.assumption_counts.push_back(count(a));
      assumed = assumed && t.assumption_counts.back() > 0;
    }
    for (const auto& gr : conj.guarantees) {
      t.guarantee_counts.push_back(count(gr));
      guaranteed = guaranteed && t.guarantee_counts.back() > 0;
    }
    t.satisfied = !assumed || guaranteed;
    r.satisfied = r.satisfied && t.satisfied;
    r.conjuncts.push_back(std::move(t));
  }
  return r;
}

}  // namespace sgrk
