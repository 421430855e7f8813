#include "sgrk/grk.hpp"

#include <algorithm>

#include "sgrk/error.hpp"
#include "sgrk/spec.hpp"

namespace sgrk {

using dd::Bdd;

AcceptingPredicate build_acc(const SymbolicGame& g, const GraphPredicates& preds) {
  if (!g.separated) throw Error(ErrorKind::separation, "accepting SCCs are defined for separated games only");
  dd::Manager& m = *g.mgr;
  const dd::Renaming up = dd::Renaming::shift(g.cur, g.next);
  AcceptingPredicate out;
  out.acc = m.one();
  for (std::size_t l = 0; l < g.guarantees.size(); ++l) {
    Bdd all_gar = m.one();
    auto& sgar = out.sgar.emplace_back();
    for (const Bdd& gar : g.guarantees[l]) {
      sgar.push_back(m.and_exists(preds.scc, m.rename(gar, up), g.next));
      all_gar &= sgar.back();
    }
    Bdd some_asm = m.zero();
    auto& sasm = out.sasm.emplace_back();
    for (const Bdd& as : g.assumptions[l]) {
      sasm.push_back(m.forall(g.next, preds.scc.implies(!m.rename(as, up))));
      some_asm |= sasm.back();
    }
    out.acc &= all_gar | some_asm;
  }
  return out;
}

TravelStrategy build_travel(const SymbolicGame& g) {
  dd::Manager& m = *g.mgr;
  const VarFrame out_frame = VarFrame::of(m.registry(), dd::Role::output);
  const dd::Renaming up = dd::Renaming::shift(out_frame.cur, out_frame.next);
  TravelStrategy t;
  Bdd reach = build_reach(m, out_frame, g.rho_o);
  t.scc_out = build_scc(reach, invert_relation(m, out_frame, reach));
  t.stay = g.rho_o & t.scc_out;
  for (const auto& conj : g.guarantees) {
    for (const Bdd& gar : conj) {
      t.guarantees.push_back(gar);
      Bdd target_move = t.stay & m.rename(gar, up);
      Bdd z = m.exists(g.out_next, target_move);
      Bdd strat = z & target_move;
      while (true) {
        Bdd znext = m.rename(z, up);
        Bdd layer = m.and_exists(t.stay, znext, g.out_next) & !z;
        if (layer.is_false()) break;
        strat |= layer & t.stay & znext;
        z |= layer;
      }
      t.reach.push_back(strat);
    }
  }
  return t;
}

Bdd determinize(const SymbolicGame& g, const Bdd& rel) {
  dd::Manager& m = *g.mgr;
  Bdd r = rel;
  for (dd::VarId o : g.out_next) {
    Bdd lit = m.var(o);
    Bdd low_possible = m.exists(g.out_next, r & !lit);
    r = r & ((!lit) | (!low_possible));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Controller

Controller::Controller(const SymbolicGame& g, Bdd win, Bdd acc, Bdd fb, TravelStrategy travel)
    : g_(&g), win_(std::move(win)), acc_(std::move(acc)), fb_(std::move(fb)), travel_(std::move(travel)) {}

std::size_t Controller::mem_bound() const { return std::max<std::size_t>(1, travel_.guarantees.size()); }

bool Controller::holds(const Bdd& f, const std::vector<dd::VarId>& vars, const std::vector<bool>& values) const {
  std::vector<bool> all(g_->mgr->registry().var_count(), false);
  for (std::size_t k = 0; k < vars.size(); ++k) all[vars[k]] = values[k];
  return g_->mgr->eval(f, all);
}

std::optional<std::vector<bool>> Controller::pick_next_output(const Bdd& rel, const std::vector<dd::VarId>& fixed,
                                                              const std::vector<bool>& values) const {
  dd::Manager& m = *g_->mgr;
  Bdd c = m.cofactor(rel, fixed, values);
  return m.pick_one(c, g_->out_next);
}

std::vector<bool> Controller::initial_output(const std::vector<bool>& input) const {
  const SymbolicGame& g = *g_;
  if (input.size() != g.in_cur.size()) throw Error(ErrorKind::invalid_argument, "input has the wrong width");
  if (!holds(g.theta_i, g.in_cur, input)) {
    throw Error(ErrorKind::illegal_input, "initial input " + to_bits(input) + " violates INIT_ENV");
  }
  dd::Manager& m = *g.mgr;
  auto o = m.pick_one(m.cofactor(g.theta_o & win_, g.in_cur, input), g.out_cur);
  if (!o) throw Error(ErrorKind::controller_undefined, "no winning initial output for input " + to_bits(input));
  return *o;
}

Controller::Step Controller::step(const std::vector<bool>& state, std::size_t mem, const std::vector<bool>& input) const {
  const SymbolicGame& g = *g_;
  const std::size_t ni = g.in_cur.size();
  if (state.size() != g.cur.size() || input.size() != ni) {
    throw Error(ErrorKind::invalid_argument, "state or input has the wrong width");
  }
  std::vector<dd::VarId> state_and_input = g.cur;
  state_and_input.insert(state_and_input.end(), g.in_next.begin(), g.in_next.end());
  std::vector<bool> values = state;
  values.insert(values.end(), input.begin(), input.end());
  if (!holds(g.rho_i, state_and_input, values)) {
    throw Error(ErrorKind::illegal_input, "input " + to_bits(input) + " is illegal at state " + to_bits(state));
  }
  if (!holds(win_, g.cur, state)) {
    throw Error(ErrorKind::controller_undefined, "state " + to_bits(state) + " is outside the winning region");
  }
  const std::size_t m = travel_.guarantees.size();
  if (holds(acc_, g.cur, state)) {
    std::vector<bool> out(state.begin() + static_cast<long>(ni), state.end());
    for (std::size_t k = 0; k < m; ++k) {
      std::size_t nxt = (mem + k) % m;
      if (auto o = pick_next_output(travel_.reach[nxt], g.out_cur, out)) {
        std::size_t mem_next = holds(travel_.guarantees[nxt], g.out_cur, *o) ? (nxt + 1) % m : mem % m;
        return {*o, mem_next};
      }
    }
    if (auto o = pick_next_output(travel_.stay, g.out_cur, out)) return {*o, m == 0 ? 0 : mem % m};
  }
  auto o = pick_next_output(fb_, state_and_input, values);
  if (!o) {
    throw Error(ErrorKind::controller_undefined,
                "strategy has no move at state " + to_bits(state) + " for input " + to_bits(input));
  }
  return {*o, 0};
}

// ---------------------------------------------------------------------------

SolveResult solve(const SymbolicGame& g, const SolveOptions& options) {
  if (!g.separated) throw Error(ErrorKind::separation, "the GR(k) solver needs a separated game");
  dd::Manager& m = *g.mgr;
  const std::uint64_t start = m.op_count();
  SolveResult r;
  GraphPredicates preds = build_graph(g);
  r.reach_iterations = preds.reach_iterations;
  r.acc = build_acc(g, preds);
  r.weak_buchi = solve_weak_buchi(g, preds, r.acc.acc, options.weak_buchi);
  r.win = r.weak_buchi.win;
  r.realizable = check_realizable(g, r.win);
  if (r.realizable && options.synthesize) {
    r.controller.emplace(g, r.win, r.acc.acc, r.weak_buchi.fb, build_travel(g));
  }
  r.ops = m.op_count() - start;
  return r;
}

}  // namespace sgrk
