#include "sgrk/graph.hpp"

#include "sgrk/error.hpp"
#include "sgrk/spec.hpp"

namespace sgrk {

using dd::Bdd;
using dd::Copy;

VarFrame VarFrame::all(const dd::VarRegistry& reg) {
  return {reg.vars(Copy::current), reg.vars(Copy::next), reg.vars(Copy::aux)};
}

VarFrame VarFrame::of(const dd::VarRegistry& reg, dd::Role role) {
  return {reg.vars(Copy::current, role), reg.vars(Copy::next, role), reg.vars(Copy::aux, role)};
}

Bdd identity_relation(dd::Manager& m, const VarFrame& f) {
  Bdd id = m.one();
  for (std::size_t k = f.cur.size(); k-- > 0;) id &= m.var(f.cur[k]).iff(m.var(f.next[k]));
  return id;
}

Bdd to_next(dd::Manager& m, const VarFrame& f, const Bdd& set) {
  return m.rename(set, dd::Renaming::shift(f.cur, f.next));
}

Bdd build_reach(dd::Manager& m, const VarFrame& f, const Bdd& trans, std::size_t* iterations) {
  // trans(X'', X'), computed once.
  Bdd step = m.rename(trans, dd::Renaming::shift(f.cur, f.aux));
  const dd::Renaming next_to_aux = dd::Renaming::shift(f.next, f.aux);
  Bdd reach = identity_relation(m, f);
  Bdd frontier = reach;
  std::size_t n = 0;
  while (!frontier.is_false()) {
    ++n;
    Bdd fresh = m.and_exists(m.rename(frontier, next_to_aux), step, f.aux);
    frontier = fresh & !reach;
    reach |= frontier;
  }
  if (iterations != nullptr) *iterations = n;
  return reach;
}

Bdd invert_relation(dd::Manager& m, const VarFrame& f, const Bdd& rel) {
  std::vector<std::pair<dd::VarId, dd::VarId>> pairs;
  for (std::size_t k = 0; k < f.cur.size(); ++k) {
    pairs.emplace_back(f.cur[k], f.next[k]);
    pairs.emplace_back(f.next[k], f.cur[k]);
  }
  return m.rename(rel, dd::Renaming(std::move(pairs)));
}

Bdd build_scc(const Bdd& reach, const Bdd& reach_inv) { return reach & reach_inv; }

Bdd build_terminal(dd::Manager& m, const VarFrame& f, const Bdd& reach, const Bdd& scc) {
  return m.forall(f.next, reach.implies(scc));
}

GraphPredicates build_graph(dd::Manager& m, const VarFrame& f, const Bdd& trans) {
  GraphPredicates g;
  g.trans = trans;
  g.reach = build_reach(m, f, trans, &g.reach_iterations);
  g.reach_inv = invert_relation(m, f, g.reach);
  g.scc = build_scc(g.reach, g.reach_inv);
  g.terminal = build_terminal(m, f, g.reach, g.scc);
  return g;
}

GraphPredicates build_graph(const SymbolicGame& g) {
  return build_graph(*g.mgr, VarFrame::all(g.mgr->registry()), g.trans());
}

std::optional<std::pair<std::vector<bool>, std::vector<bool>>> saturation_witness(
    dd::Manager& m, const VarFrame& f, const Bdd& scc, const Bdd& set) {
  Bdd split = scc & set & !to_next(m, f, set);
  std::vector<dd::VarId> both = f.cur;
  both.insert(both.end(), f.next.begin(), f.next.end());
  auto w = m.pick_one(split, both);
  if (!w) return std::nullopt;
  std::vector<bool> a(w->begin(), w->begin() + static_cast<long>(f.cur.size()));
  std::vector<bool> b(w->begin() + static_cast<long>(f.cur.size()), w->end());
  return std::make_pair(a, b);
}

Bdd dc_step(dd::Manager& m, const VarFrame& f, const GraphPredicates& g, const Bdd& dc, bool check_saturation) {
  if (check_saturation && saturation_witness(m, f, g.scc, dc)) {
    throw Error(ErrorKind::invalid_argument, "dc_step: argument is not a union of SCCs");
  }
  return m.forall(f.next, g.reach.implies(g.scc | to_next(m, f, dc)));
}

}  // namespace sgrk
