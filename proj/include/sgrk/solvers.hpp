#pragma once

#include <cstdint>
#include <vector>

#include "sgrk/dd.hpp"
#include "sgrk/graph.hpp"

namespace sgrk {

struct SymbolicGame;

// Strategy relations range over X, I' and O'.
struct SubgameResult {
  dd::Bdd win;
  dd::Bdd strat;
  std::size_t iterations = 0;
};

// pre_s(Z)(X) = forall I'. rho_I -> exists O'. rho_O & Z(X')
dd::Bdd controllable_pre(const SymbolicGame& g, const dd::Bdd& z);

SubgameResult solve_reachability(const SymbolicGame& g, const dd::Bdd& source, const dd::Bdd& target);
SubgameResult solve_safety(const SymbolicGame& g, const dd::Bdd& source, const dd::Bdd& safe);

struct WeakBuchiOptions {
#ifdef NDEBUG
  bool check_dc_saturation = false;
#else
  bool check_dc_saturation = true;
#endif
};

struct WeakBuchiSolution {
  dd::Bdd win;
  dd::Bdd fb;
  std::size_t iterations = 0;
  std::uint64_t ops_used = 0;
  // Kernel operations and number of newly classified states per iteration.
  std::vector<std::uint64_t> iteration_ops;
  std::vector<std::uint64_t> layer_states;
};

// Throws not_weak when `acc` splits an SCC.
WeakBuchiSolution solve_weak_buchi(const SymbolicGame& g, const GraphPredicates& preds, const dd::Bdd& acc,
                                   const WeakBuchiOptions& options = {});
// Builds the graph predicates first; their cost is included in ops_used.
WeakBuchiSolution solve_weak_buchi(const SymbolicGame& g, const dd::Bdd& acc, const WeakBuchiOptions& options = {});

// forall I. theta_I -> exists O. theta_O & win
bool check_realizable(const SymbolicGame& g, const dd::Bdd& win);

}  // namespace sgrk
