#pragma once

// Symbolic reachability, SCC and terminal-SCC predicates over a game graph.

#include <optional>
#include <vector>

#include "sgrk/dd.hpp"

namespace sgrk {

struct SymbolicGame;

// The variables a relation ranges over: X, X' and the auxiliary copy X''.
struct VarFrame {
  std::vector<dd::VarId> cur, next, aux;

  static VarFrame all(const dd::VarRegistry& reg);
  static VarFrame of(const dd::VarRegistry& reg, dd::Role role);
};

struct GraphPredicates {
  dd::Bdd trans;      // X, X'
  dd::Bdd reach;      // X, X'  reflexive-transitive closure of trans
  dd::Bdd reach_inv;  // X, X'  reach with the arguments swapped
  dd::Bdd scc;        // X, X'
  dd::Bdd terminal;   // X
  std::size_t reach_iterations = 0;
};

dd::Bdd identity_relation(dd::Manager& m, const VarFrame& f);
dd::Bdd build_reach(dd::Manager& m, const VarFrame& f, const dd::Bdd& trans, std::size_t* iterations = nullptr);
dd::Bdd invert_relation(dd::Manager& m, const VarFrame& f, const dd::Bdd& rel);
dd::Bdd build_scc(const dd::Bdd& reach, const dd::Bdd& reach_inv);
dd::Bdd build_terminal(dd::Manager& m, const VarFrame& f, const dd::Bdd& reach, const dd::Bdd& scc);
GraphPredicates build_graph(dd::Manager& m, const VarFrame& f, const dd::Bdd& trans);
GraphPredicates build_graph(const SymbolicGame& g);

// set(X) -> set(X')
dd::Bdd to_next(dd::Manager& m, const VarFrame& f, const dd::Bdd& set);

// A pair of states in the same SCC where `set` holds on exactly one of them.
std::optional<std::pair<std::vector<bool>, std::vector<bool>>> saturation_witness(
    dd::Manager& m, const VarFrame& f, const dd::Bdd& scc, const dd::Bdd& set);

// DC^{i+1}(X) = forall X'. reach(X,X') -> (scc(X,X') | DC^i(X')).
// With `check_saturation`, throws invalid_argument if `dc` splits an SCC.
dd::Bdd dc_step(dd::Manager& m, const VarFrame& f, const GraphPredicates& g, const dd::Bdd& dc,
                bool check_saturation = false);

}  // namespace sgrk
