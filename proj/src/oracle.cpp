#include "sgrk/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "sgrk/error.hpp"
#include "sgrk/grk.hpp"

namespace sgrk {

std::vector<bool> ExplicitGame::input_values(std::uint32_t i) const {
  std::vector<bool> out(n_in);
  for (std::size_t k = 0; k < n_in; ++k) out[k] = (i >> (n_in - 1 - k)) & 1;
  return out;
}

std::vector<bool> ExplicitGame::output_values(std::uint32_t o) const {
  std::vector<bool> out(n_out);
  for (std::size_t k = 0; k < n_out; ++k) out[k] = (o >> (n_out - 1 - k)) & 1;
  return out;
}

std::vector<bool> ExplicitGame::state_values(std::uint32_t s) const {
  std::vector<bool> out = input_values(in_of(s));
  std::vector<bool> o = output_values(out_of(s));
  out.insert(out.end(), o.begin(), o.end());
  return out;
}

std::uint32_t ExplicitGame::index_of(const std::vector<bool>& bits) const {
  std::uint32_t s = 0;
  for (bool b : bits) s = (s << 1) | (b ? 1u : 0u);
  return s;
}

// ---------------------------------------------------------------------------

std::vector<std::uint32_t> tarjan_scc(std::size_t n, const std::vector<std::vector<std::uint32_t>>& succ,
                                      std::size_t* count) {
  constexpr std::uint32_t kUnset = 0xffffffffu;
  std::vector<std::uint32_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::vector<std::pair<std::uint32_t, std::size_t>> call;  // (node, next edge)
  std::uint32_t next_index = 0, next_comp = 0;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, e] = call.back();
      if (e < succ[v].size()) {
        std::uint32_t w = succ[v][e++];
        if (index[w] == kUnset) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      std::uint32_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = next_comp;
        } while (w != done);
        ++next_comp;
      }
    }
  }
  if (count != nullptr) *count = next_comp;
  return comp;
}

namespace {

struct Slots {
  std::map<std::string, std::size_t> index;  // declared name -> position (inputs then outputs)
  std::size_t n = 0;

  explicit Slots(const SpecModel& spec) {
    for (const auto& v : spec.inputs) index.emplace(v, index.size());
    for (const auto& v : spec.outputs) index.emplace(v, index.size());
    n = index.size();
  }

  CompiledExpr compile(const ExprPtr& e) const {
    return CompiledExpr(e, [&](const Atom& a) {
      auto it = index.find(a.name);
      if (it == index.end()) throw Error(ErrorKind::unknown_variable, "unknown variable: " + a.name);
      return it->second + (a.primed ? n : 0);
    });
  }
};

bool syntactically_separated(const SpecModel& spec) {
  std::set<std::string> in(spec.inputs.begin(), spec.inputs.end());
  auto only = [&](const ExprPtr& e, bool inputs) {
    for (const Atom& a : atoms(e)) {
      if (in.count(a.name) != static_cast<std::size_t>(inputs)) return false;
    }
    return true;
  };
  if (!only(spec.init_env, true) || !only(spec.trans_env, true)) return false;
  if (!only(spec.init_sys, false) || !only(spec.trans_sys, false)) return false;
  return true;
}

}  // namespace

ExplicitGame enumerate_game(const SpecModel& spec, std::size_t cap) {
  ExplicitGame g;
  g.n_in = spec.inputs.size();
  g.n_out = spec.outputs.size();
  const std::size_t n = g.n_in + g.n_out;
  if (n >= 31 || (std::size_t{1} << n) > cap) {
    throw Error(ErrorKind::budget_exceeded,
                "explicit game has 2^" + std::to_string(n) + " states, over the budget of " + std::to_string(cap));
  }
  g.num_states = 1u << n;
  g.separated = syntactically_separated(spec);
  Slots slots(spec);
  const CompiledExpr theta_i = slots.compile(spec.init_env), theta_o = slots.compile(spec.init_sys);
  const CompiledExpr rho_i = slots.compile(spec.trans_env), rho_o = slots.compile(spec.trans_sys);

  // Slot masks: input k sits in slot k, output k in slot n_in + k; primed copies add n.
  auto in_mask = [&](std::uint32_t i, std::size_t shift) {
    std::uint64_t m = 0;
    for (std::size_t k = 0; k < g.n_in; ++k) {
      if ((i >> (g.n_in - 1 - k)) & 1) m |= std::uint64_t{1} << (k + shift);
    }
    return m;
  };
  auto out_mask = [&](std::uint32_t o, std::size_t shift) {
    std::uint64_t m = 0;
    for (std::size_t k = 0; k < g.n_out; ++k) {
      if ((o >> (g.n_out - 1 - k)) & 1) m |= std::uint64_t{1} << (g.n_in + k + shift);
    }
    return m;
  };
  const std::uint32_t ni = 1u << g.n_in, no = 1u << g.n_out;

  g.init_env.resize(ni);
  for (std::uint32_t i = 0; i < ni; ++i) g.init_env[i] = theta_i.eval_bits(in_mask(i, 0));
  g.init_sys.resize(g.num_states);
  for (std::uint32_t s = 0; s < g.num_states; ++s) {
    g.init_sys[s] = theta_o.eval_bits(in_mask(g.in_of(s), 0) | out_mask(g.out_of(s), 0));
  }

  if (g.separated) {
    g.env_graph.resize(ni);
    for (std::uint32_t i = 0; i < ni; ++i) {
      for (std::uint32_t j = 0; j < ni; ++j) {
        if (rho_i.eval_bits(in_mask(i, 0) | in_mask(j, n))) g.env_graph[i].push_back(j);
      }
      if (g.env_graph[i].empty()) {
        throw Error(ErrorKind::deadlock, "environment deadlocks at inputs=" + to_bits(g.input_values(i)));
      }
    }
    g.sys_graph.resize(no);
    for (std::uint32_t o = 0; o < no; ++o) {
      for (std::uint32_t p = 0; p < no; ++p) {
        if (rho_o.eval_bits(out_mask(o, 0) | out_mask(p, n))) g.sys_graph[o].push_back(p);
      }
      if (g.sys_graph[o].empty()) {
        throw Error(ErrorKind::deadlock, "system deadlocks at outputs=" + to_bits(g.output_values(o)));
      }
    }
  } else {
    g.env_table.resize(g.num_states);
    g.sys_table.resize(g.num_states);
    for (std::uint32_t s = 0; s < g.num_states; ++s) {
      std::uint64_t base = in_mask(g.in_of(s), 0) | out_mask(g.out_of(s), 0);
      for (std::uint32_t j = 0; j < ni; ++j) {
        if (!rho_i.eval_bits(base | in_mask(j, n))) continue;
        g.env_table[s].push_back(j);
        auto& moves = g.sys_table[s].emplace_back();
        for (std::uint32_t p = 0; p < no; ++p) {
          if (rho_o.eval_bits(base | in_mask(j, n) | out_mask(p, n))) moves.push_back(p);
        }
        if (moves.empty()) {
          throw Error(ErrorKind::deadlock, "system deadlocks at " + to_bits(g.state_values(s)));
        }
      }
      if (g.env_table[s].empty()) {
        throw Error(ErrorKind::deadlock, "environment deadlocks at " + to_bits(g.state_values(s)));
      }
    }
  }

  g.succ.resize(g.num_states);
  for (std::uint32_t s = 0; s < g.num_states; ++s) {
    const auto& env = g.env_moves(s);
    for (std::size_t k = 0; k < env.size(); ++k) {
      for (std::uint32_t p : g.sys_moves(s, k)) g.succ[s].push_back(g.state(env[k], p));
    }
    std::sort(g.succ[s].begin(), g.succ[s].end());
    g.succ[s].erase(std::unique(g.succ[s].begin(), g.succ[s].end()), g.succ[s].end());
  }
  std::size_t count = 0;
  g.scc_id = tarjan_scc(g.num_states, g.succ, &count);
  g.scc_members.resize(count);
  g.scc_nontrivial.assign(count, false);
  for (std::uint32_t s = 0; s < g.num_states; ++s) g.scc_members[g.scc_id[s]].push_back(s);
  for (std::uint32_t s = 0; s < g.num_states; ++s) {
    for (std::uint32_t t : g.succ[s]) {
      if (g.scc_id[t] == g.scc_id[s]) g.scc_nontrivial[g.scc_id[s]] = true;
    }
  }
  return g;
}

std::vector<bool> grk_acc_labels(const ExplicitGame& g, const SpecModel& spec) {
  Slots slots(spec);
  std::vector<std::vector<CompiledExpr>> as, gs;
  for (const auto& c : spec.conjuncts) {
    auto& a = as.emplace_back();
    auto& gg = gs.emplace_back();
    for (const auto& e : c.assumptions) a.push_back(slots.compile(e));
    for (const auto& e : c.guarantees) gg.push_back(slots.compile(e));
  }
  auto mask = [&](std::uint32_t s) {
    std::uint64_t m = 0;
    std::vector<bool> v = g.state_values(s);
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k]) m |= std::uint64_t{1} << k;
    }
    return m;
  };
  std::vector<bool> labels(g.scc_count(), true);
  for (std::size_t c = 0; c < g.scc_count(); ++c) {
    for (std::size_t l = 0; l < as.size() && labels[c]; ++l) {
      bool all_gar = true;
      for (const auto& gar : gs[l]) {
        bool seen = false;
        for (std::uint32_t s : g.scc_members[c]) seen = seen || gar.eval_bits(mask(s));
        all_gar = all_gar && seen;
      }
      bool some_asm_absent = false;
      for (const auto& a : as[l]) {
        bool seen = false;
        for (std::uint32_t s : g.scc_members[c]) seen = seen || a.eval_bits(mask(s));
        some_asm_absent = some_asm_absent || !seen;
      }
      labels[c] = all_gar || some_asm_absent;
    }
  }
  return labels;
}

std::vector<bool> acc_labels_from_states(const ExplicitGame& g, const std::vector<bool>& states) {
  if (auto v = saturation_violation(g, states)) {
    throw Error(ErrorKind::not_weak, "acceptance set splits the SCC of state " + std::to_string(v->first));
  }
  std::vector<bool> labels(g.scc_count());
  for (std::size_t c = 0; c < g.scc_count(); ++c) labels[c] = states[g.scc_members[c].front()];
  return labels;
}

std::vector<bool> expand_labels(const ExplicitGame& g, const std::vector<bool>& scc_labels) {
  std::vector<bool> out(g.num_states);
  for (std::uint32_t s = 0; s < g.num_states; ++s) out[s] = scc_labels[g.scc_id[s]];
  return out;
}

namespace {

// Every environment move has a system reply into `target`.
template <class Pred>
bool sys_pre(const ExplicitGame& g, std::uint32_t s, Pred target) {
  const auto& env = g.env_moves(s);
  for (std::size_t k = 0; k < env.size(); ++k) {
    bool reply = false;
    for (std::uint32_t p : g.sys_moves(s, k)) {
      if (target(g.state(env[k], p))) {
        reply = true;
        break;
      }
    }
    if (!reply) return false;
  }
  return true;
}

// Some environment move leaves the system only replies into `target`.
template <class Pred>
bool env_pre(const ExplicitGame& g, std::uint32_t s, Pred target) {
  const auto& env = g.env_moves(s);
  for (std::size_t k = 0; k < env.size(); ++k) {
    bool all = true;
    for (std::uint32_t p : g.sys_moves(s, k)) {
      if (!target(g.state(env[k], p))) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

// Backward induction shared by both players: `attract` SCCs use a least
// fixed point, the others a greatest fixed point.
template <class Pre>
std::vector<bool> induction(const ExplicitGame& g, const std::vector<bool>& attract_scc, Pre pre) {
  std::vector<bool> won(g.num_states, false), in_z(g.num_states, false);
  for (std::size_t c = 0; c < g.scc_count(); ++c) {
    const auto& members = g.scc_members[c];
    auto target = [&](std::uint32_t t) { return won[t] || in_z[t]; };
    if (attract_scc[c]) {
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::uint32_t s : members) {
          if (!in_z[s] && pre(g, s, target)) {
            in_z[s] = true;
            changed = true;
          }
        }
      }
    } else {
      for (std::uint32_t s : members) in_z[s] = true;
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::uint32_t s : members) {
          if (in_z[s] && !pre(g, s, target)) {
            in_z[s] = false;
            changed = true;
          }
        }
      }
    }
    for (std::uint32_t s : members) {
      won[s] = in_z[s];
      in_z[s] = false;
    }
  }
  return won;
}

}  // namespace

std::vector<bool> solve_backward(const ExplicitGame& g, const std::vector<bool>& scc_acc) {
  std::vector<bool> attract(scc_acc.size());
  for (std::size_t c = 0; c < scc_acc.size(); ++c) attract[c] = !scc_acc[c];
  return induction(g, attract, [](const ExplicitGame& gg, std::uint32_t s, auto t) { return sys_pre(gg, s, t); });
}

std::vector<bool> solve_env_backward(const ExplicitGame& g, const std::vector<bool>& scc_acc) {
  return induction(g, scc_acc, [](const ExplicitGame& gg, std::uint32_t s, auto t) { return env_pre(gg, s, t); });
}

bool explicit_realizable(const ExplicitGame& g, const std::vector<bool>& win) {
  for (std::uint32_t i = 0; i < (1u << g.n_in); ++i) {
    if (!g.init_env[i]) continue;
    bool some = false;
    for (std::uint32_t o = 0; o < (1u << g.n_out) && !some; ++o) {
      std::uint32_t s = g.state(i, o);
      some = g.init_sys[s] && win[s];
    }
    if (!some) return false;
  }
  return true;
}

std::optional<DelayViolation> check_delay_property(const ExplicitGame& g, const std::vector<bool>& win) {
  if (!g.separated) throw Error(ErrorKind::invalid_argument, "the delay property is stated for separated games");
  // One-step closure suffices: the full statement follows by induction along
  // the environment path and the reversed system path.
  std::vector<std::vector<std::uint32_t>> sys_pred(g.sys_graph.size());
  for (std::uint32_t o = 0; o < g.sys_graph.size(); ++o) {
    for (std::uint32_t p : g.sys_graph[o]) sys_pred[p].push_back(o);
  }
  for (std::uint32_t s = 0; s < g.num_states; ++s) {
    if (!win[s]) continue;
    std::uint32_t i = g.in_of(s), o = g.out_of(s);
    for (std::uint32_t j : g.env_graph[i]) {
      if (!win[g.state(j, o)]) return DelayViolation{s, g.state(j, o), "environment advanced"};
    }
    for (std::uint32_t p : sys_pred[o]) {
      if (!win[g.state(i, p)]) return DelayViolation{s, g.state(i, p), "system lagged"};
    }
  }
  return std::nullopt;
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> saturation_violation(const ExplicitGame& g,
                                                                             const std::vector<bool>& set) {
  for (const auto& members : g.scc_members) {
    for (std::uint32_t s : members) {
      if (set[s] != set[members.front()]) return std::make_pair(members.front(), s);
    }
  }
  return std::nullopt;
}

bool check_scc_product_structure(const ExplicitGame& g, std::string* why) {
  if (!g.separated) return false;
  std::size_t ci = 0, co = 0;
  auto in_scc = tarjan_scc(g.env_graph.size(), g.env_graph, &ci);
  auto out_scc = tarjan_scc(g.sys_graph.size(), g.sys_graph, &co);
  std::vector<std::size_t> in_size(ci, 0), out_size(co, 0);
  for (auto c : in_scc) ++in_size[c];
  for (auto c : out_scc) ++out_size[c];
  for (std::size_t c = 0; c < g.scc_count(); ++c) {
    if (!g.scc_nontrivial[c]) continue;
    std::set<std::uint32_t> ins, outs;
    for (std::uint32_t s : g.scc_members[c]) {
      ins.insert(g.in_of(s));
      outs.insert(g.out_of(s));
    }
    auto covers = [](const std::set<std::uint32_t>& proj, const std::vector<std::uint32_t>& ids,
                     const std::vector<std::size_t>& sizes) {
      std::uint32_t id = ids[*proj.begin()];
      for (std::uint32_t v : proj) {
        if (ids[v] != id) return false;
      }
      return proj.size() == sizes[id];
    };
    if (!covers(ins, in_scc, in_size) || !covers(outs, out_scc, out_size)) {
      if (why != nullptr) *why = "product SCC " + std::to_string(c) + " does not project onto component SCCs";
      return false;
    }
  }
  return true;
}

Verdict model_check_controller(const ExplicitGame& g, const SpecModel& spec, const Controller& ctrl,
                               std::size_t cap) {
  Verdict v;
  Slots slots(spec);
  const std::size_t mem_bound = ctrl.mem_bound();
  if (static_cast<std::size_t>(g.num_states) * mem_bound > cap) {
    throw Error(ErrorKind::budget_exceeded, "controller product exceeds the state budget");
  }
  auto fail = [&](std::string msg) {
    v.ok = false;
    v.message = std::move(msg);
    return v;
  };
  const std::uint32_t ni = 1u << g.n_in;
  auto key = [&](std::uint32_t s, std::size_t mem) { return static_cast<std::uint32_t>(s * mem_bound + mem); };
  const std::size_t total = g.num_states * mem_bound;
  std::vector<bool> seen(total, false);
  std::vector<std::vector<std::uint32_t>> succ(total);
  std::vector<std::uint32_t> queue;

  try {
    for (std::uint32_t i = 0; i < ni; ++i) {
      if (!g.init_env[i]) continue;
      std::vector<bool> o = ctrl.initial_output(g.input_values(i));
      std::uint32_t s = g.state(i, g.index_of(o));
      if (!g.init_sys[s]) return fail("initial output " + to_bits(o) + " violates INIT_SYS");
      if (!seen[key(s, 0)]) {
        seen[key(s, 0)] = true;
        queue.push_back(key(s, 0));
      }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      std::uint32_t node = queue[head];
      std::uint32_t s = node / static_cast<std::uint32_t>(mem_bound);
      std::size_t mem = node % mem_bound;
      const auto& env = g.env_moves(s);
      for (std::size_t k = 0; k < env.size(); ++k) {
        Controller::Step st = ctrl.step(g.state_values(s), mem, g.input_values(env[k]));
        std::uint32_t o = g.index_of(st.output);
        const auto& legal = g.sys_moves(s, k);
        if (std::find(legal.begin(), legal.end(), o) == legal.end()) {
          return fail("illegal move " + to_bits(g.state_values(s)) + " --" + to_bits(g.input_values(env[k])) + "/" +
                      to_bits(st.output) + "-->");
        }
        if (st.mem_next >= mem_bound) return fail("memory value out of range");
        std::uint32_t t = key(g.state(env[k], o), st.mem_next);
        succ[node].push_back(t);
        if (!seen[t]) {
          seen[t] = true;
          queue.push_back(t);
        }
      }
    }
  } catch (const Error& e) {
    return fail(std::string("controller failed: ") + e.what());
  }
  v.explored = queue.size();

  auto state_mask = [&](std::uint32_t node) {
    std::uint32_t s = node / static_cast<std::uint32_t>(mem_bound);
    std::uint64_t m = 0;
    std::vector<bool> vals = g.state_values(s);
    for (std::size_t k = 0; k < vals.size(); ++k) {
      if (vals[k]) m |= std::uint64_t{1} << k;
    }
    return m;
  };
  // A play violates conjunct l iff its infinity set avoids some guarantee while
  // meeting every assumption. Such sets live in SCCs of the product restricted
  // to the guarantee-free nodes.
  for (std::size_t l = 0; l < spec.conjuncts.size(); ++l) {
    const auto& conj = spec.conjuncts[l];
    std::vector<CompiledExpr> as;
    for (const auto& a : conj.assumptions) as.push_back(slots.compile(a));
    for (std::size_t j = 0; j < conj.guarantees.size(); ++j) {
      CompiledExpr gar = slots.compile(conj.guarantees[j]);
      std::vector<bool> keep(total, false);
      for (std::uint32_t node : queue) keep[node] = !gar.eval_bits(state_mask(node));
      std::vector<std::vector<std::uint32_t>> sub(total);
      for (std::uint32_t node : queue) {
        if (!keep[node]) continue;
        for (std::uint32_t t : succ[node]) {
          if (keep[t]) sub[node].push_back(t);
        }
      }
      std::size_t count = 0;
      auto comp = tarjan_scc(total, sub, &count);
      std::vector<bool> nontrivial(count, false);
      std::vector<std::vector<bool>> met(count, std::vector<bool>(as.size(), false));
      std::vector<std::uint32_t> witness(count, 0);
      for (std::uint32_t node : queue) {
        if (!keep[node]) continue;
        witness[comp[node]] = node;
        for (std::uint32_t t : sub[node]) {
          if (comp[t] == comp[node]) nontrivial[comp[node]] = true;
        }
        std::uint64_t mask = state_mask(node);
        for (std::size_t i = 0; i < as.size(); ++i) {
          if (as[i].eval_bits(mask)) met[comp[node]][i] = true;
        }
      }
      for (std::size_t c = 0; c < count; ++c) {
        if (!nontrivial[c]) continue;
        if (std::all_of(met[c].begin(), met[c].end(), [](bool b) { return b; })) {
          std::uint32_t node = witness[c];
          return fail("conjunct " + std::to_string(l) + ": a fair cycle through state " +
                      to_bits(g.state_values(node / static_cast<std::uint32_t>(mem_bound))) + " (mem " +
                      std::to_string(node % mem_bound) + ") never satisfies guarantee " + std::to_string(j));
        }
      }
    }
  }
  return v;
}

Verdict check_env_spoiling(const ExplicitGame& g, const std::vector<bool>& win, const std::vector<bool>& env_win) {
  Verdict v;
  for (std::uint32_t s = 0; s < g.num_states; ++s) {
    if (win[s] == env_win[s]) {
      v.ok = false;
      v.message = "state " + to_bits(g.state_values(s)) + (win[s] ? " is claimed by both players" : " is claimed by neither player");
      return v;
    }
  }
  v.explored = g.num_states;
  return v;
}

std::vector<bool> explicit_set(const ExplicitGame& g, const dd::Manager& m, const std::vector<dd::VarId>& cur,
                               const dd::Bdd& set) {
  std::vector<bool> out(g.num_states);
  std::vector<bool> values(m.registry().var_count(), false);
  for (std::uint32_t s = 0; s < g.num_states; ++s) {
    std::vector<bool> vals = g.state_values(s);
    for (std::size_t k = 0; k < cur.size(); ++k) values[cur[k]] = vals[k];
    out[s] = m.eval(set, values);
  }
  return out;
}

}  // namespace sgrk
