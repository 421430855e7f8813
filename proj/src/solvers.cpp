#include "sgrk/solvers.hpp"

#include "sgrk/error.hpp"
#include "sgrk/spec.hpp"

namespace sgrk {

using dd::Bdd;

Bdd controllable_pre(const SymbolicGame& g, const Bdd& z) {
  dd::Manager& m = *g.mgr;
  Bdd znext = m.rename(z, dd::Renaming::shift(g.cur, g.next));
  Bdd sys = m.and_exists(g.rho_o, znext, g.out_next);
  return m.forall(g.in_next, g.rho_i.implies(sys));
}

SubgameResult solve_reachability(const SymbolicGame& g, const Bdd& source, const Bdd& target) {
  dd::Manager& m = *g.mgr;
  const dd::Renaming up = dd::Renaming::shift(g.cur, g.next);
  SubgameResult r;
  Bdd moves = g.rho_i & g.rho_o;
  Bdd z = target;
  r.strat = target & moves;
  while (true) {
    ++r.iterations;
    Bdd layer = source & controllable_pre(g, z) & !z;
    if (layer.is_false()) break;
    r.strat |= layer & moves & m.rename(z, up);
    z |= layer;
  }
  r.win = z & source;
  return r;
}

SubgameResult solve_safety(const SymbolicGame& g, const Bdd& source, const Bdd& safe) {
  dd::Manager& m = *g.mgr;
  SubgameResult r;
  Bdd z = safe;
  while (true) {
    ++r.iterations;
    Bdd nz = z & controllable_pre(g, z);
    if (nz == z) break;
    z = nz;
  }
  r.win = source & z;
  r.strat = r.win & g.rho_i & g.rho_o & m.rename(z, dd::Renaming::shift(g.cur, g.next));
  return r;
}

WeakBuchiSolution solve_weak_buchi(const SymbolicGame& g, const GraphPredicates& preds, const Bdd& acc,
                                   const WeakBuchiOptions& options) {
  dd::Manager& m = *g.mgr;
  const VarFrame frame = VarFrame::all(m.registry());
  const std::uint64_t start = m.op_count();

  if (auto w = saturation_witness(m, frame, preds.scc, acc)) {
    throw Error(ErrorKind::not_weak, "acceptance set splits an SCC: " + to_bits(w->first) + " is accepting but " +
                                         to_bits(w->second) + " in the same SCC is not");
  }

  WeakBuchiSolution sol;
  Bdd dc = preds.terminal;
  Bdd win = preds.terminal & acc;
  Bdd fb = preds.terminal & g.rho_i.implies(g.rho_o);
  sol.iteration_ops.push_back(m.op_count() - start);
  sol.layer_states.push_back(m.sat_count(dc, g.cur));

  const std::uint64_t cap = g.state_space_size();
  while (!dc.is_true()) {
    if (sol.iterations >= cap) throw Error(ErrorKind::internal, "weak Buchi fixed point did not converge");
    const std::uint64_t before = m.op_count();
    ++sol.iterations;
    Bdd next_dc = dc_step(m, frame, preds, dc, options.check_dc_saturation);
    Bdd fresh = next_dc & !dc;
    if (fresh.is_false()) throw Error(ErrorKind::internal, "downward closure stopped growing");
    Bdd n = fresh & !acc;
    Bdd a = fresh & acc;
    SubgameResult reach = solve_reachability(g, n, win);
    SubgameResult safety = solve_safety(g, a, a | win);
    fb = fb | (n & reach.strat) | (a & safety.strat);
    win = win | reach.win | safety.win;
    dc = next_dc;
    sol.iteration_ops.push_back(m.op_count() - before);
    sol.layer_states.push_back(m.sat_count(fresh, g.cur));
  }
  sol.win = win;
  sol.fb = fb;
  sol.ops_used = m.op_count() - start;
  return sol;
}

WeakBuchiSolution solve_weak_buchi(const SymbolicGame& g, const Bdd& acc, const WeakBuchiOptions& options) {
  const std::uint64_t start = g.mgr->op_count();
  GraphPredicates preds = build_graph(g);
  WeakBuchiSolution sol = solve_weak_buchi(g, preds, acc, options);
  sol.ops_used = g.mgr->op_count() - start;
  return sol;
}

bool check_realizable(const SymbolicGame& g, const Bdd& win) {
  dd::Manager& m = *g.mgr;
  Bdd r = m.forall(g.in_cur, g.theta_i.implies(m.exists(g.out_cur, g.theta_o & win)));
  return r.is_true();
}

}  // namespace sgrk
