#pragma once

// Separated GR(k): accepting SCCs, the weak Buchi reduction, the intra-SCC
// travel strategy and the combined controller with a memory counter.

#include <cstdint>
#include <optional>
#include <vector>

#include "sgrk/dd.hpp"
#include "sgrk/graph.hpp"
#include "sgrk/solvers.hpp"

namespace sgrk {

struct SymbolicGame;

struct AcceptingPredicate {
  dd::Bdd acc;
  // sgar[l][j]: the SCC contains a state satisfying guarantee j of conjunct l.
  // sasm[l][i]: no state of the SCC satisfies assumption i of conjunct l.
  std::vector<std::vector<dd::Bdd>> sgar, sasm;
};

AcceptingPredicate build_acc(const SymbolicGame& g, const GraphPredicates& preds);

struct TravelStrategy {
  std::vector<dd::Bdd> guarantees;  // flattened in declaration order, over O
  std::vector<dd::Bdd> reach;       // f_r(j), over O and O'
  dd::Bdd stay;                     // rho_O restricted to the output SCC
  dd::Bdd scc_out;                  // output-graph SCC relation
};

TravelStrategy build_travel(const SymbolicGame& g);

// Keeps, for every (X, I'), only the lexicographically smallest O'.
dd::Bdd determinize(const SymbolicGame& g, const dd::Bdd& rel);

class Controller {
 public:
  struct Step {
    std::vector<bool> output;
    std::size_t mem_next;
  };

  Controller(const SymbolicGame& g, dd::Bdd win, dd::Bdd acc, dd::Bdd fb, TravelStrategy travel);

  const SymbolicGame& game() const { return *g_; }
  // Number of memory values; at least 1.
  std::size_t mem_bound() const;
  const dd::Bdd& win() const { return win_; }
  const dd::Bdd& acc() const { return acc_; }
  const dd::Bdd& fb() const { return fb_; }
  const TravelStrategy& travel() const { return travel_; }

  // Smallest output o with theta_O(o) and (input, o) winning.
  std::vector<bool> initial_output(const std::vector<bool>& input) const;
  // `state` lists inputs then outputs; `input` is the next input.
  Step step(const std::vector<bool>& state, std::size_t mem, const std::vector<bool>& input) const;

 private:
  std::optional<std::vector<bool>> pick_next_output(const dd::Bdd& rel, const std::vector<dd::VarId>& fixed,
                                                    const std::vector<bool>& values) const;
  bool holds(const dd::Bdd& f, const std::vector<dd::VarId>& vars, const std::vector<bool>& values) const;

  const SymbolicGame* g_;
  dd::Bdd win_, acc_, fb_;
  TravelStrategy travel_;
};

struct SolveOptions {
  bool synthesize = true;
  WeakBuchiOptions weak_buchi;
};

struct SolveResult {
  bool realizable = false;
  dd::Bdd win;
  AcceptingPredicate acc;
  WeakBuchiSolution weak_buchi;
  std::optional<Controller> controller;
  std::uint64_t ops = 0;
  std::size_t reach_iterations = 0;
};

SolveResult solve(const SymbolicGame& g, const SolveOptions& options = {});

}  // namespace sgrk
