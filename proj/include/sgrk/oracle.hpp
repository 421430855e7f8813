#pragma once

// Explicit-state ground truth. Everything here evaluates formulas through
// CompiledExpr and never touches decision diagrams, except the helpers that
// convert symbolic sets into explicit ones.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sgrk/dd.hpp"
#include "sgrk/spec.hpp"

namespace sgrk {

class Controller;

// State index: input index * 2^|O| + output index; within each index the
// first declared variable is the most significant bit.
struct ExplicitGame {
  std::size_t n_in = 0, n_out = 0;
  std::uint32_t num_states = 0;
  bool separated = true;

  // Separated games: component graphs.
  std::vector<std::vector<std::uint32_t>> env_graph;  // input -> inputs
  std::vector<std::vector<std::uint32_t>> sys_graph;  // output -> outputs
  // General games: env moves per state, sys moves per (state, env move index).
  std::vector<std::vector<std::uint32_t>> env_table;
  std::vector<std::vector<std::vector<std::uint32_t>>> sys_table;

  std::vector<bool> init_env;  // per input index
  std::vector<bool> init_sys;  // per state (theta_O may read inputs in general games)

  std::vector<std::vector<std::uint32_t>> succ;  // product adjacency
  std::vector<std::uint32_t> scc_id;             // Tarjan completion order: successors first
  std::vector<std::vector<std::uint32_t>> scc_members;
  std::vector<bool> scc_nontrivial;

  std::uint32_t in_of(std::uint32_t s) const { return s >> n_out; }
  std::uint32_t out_of(std::uint32_t s) const { return s & ((1u << n_out) - 1); }
  std::uint32_t state(std::uint32_t i, std::uint32_t o) const { return (i << n_out) | o; }
  std::size_t scc_count() const { return scc_members.size(); }

  const std::vector<std::uint32_t>& env_moves(std::uint32_t s) const {
    return separated ? env_graph[in_of(s)] : env_table[s];
  }
  const std::vector<std::uint32_t>& sys_moves(std::uint32_t s, std::size_t env_move) const {
    return separated ? sys_graph[out_of(s)] : sys_table[s][env_move];
  }

  // Inputs then outputs, declared order.
  std::vector<bool> state_values(std::uint32_t s) const;
  std::vector<bool> input_values(std::uint32_t i) const;
  std::vector<bool> output_values(std::uint32_t o) const;
  std::uint32_t index_of(const std::vector<bool>& bits) const;
};

inline constexpr std::size_t kDefaultStateBudget = std::size_t{1} << 14;

// Uses component graphs when the specification is syntactically separated.
ExplicitGame enumerate_game(const SpecModel& spec, std::size_t cap = kDefaultStateBudget);

// Tarjan over an arbitrary successor function; ids follow completion order.
std::vector<std::uint32_t> tarjan_scc(std::size_t n, const std::vector<std::vector<std::uint32_t>>& succ,
                                      std::size_t* count = nullptr);

// Per-SCC labels from the two GR(k) clauses.
std::vector<bool> grk_acc_labels(const ExplicitGame& g, const SpecModel& spec);
// Per-SCC labels from a state set; throws not_weak if the set splits an SCC.
std::vector<bool> acc_labels_from_states(const ExplicitGame& g, const std::vector<bool>& states);
std::vector<bool> expand_labels(const ExplicitGame& g, const std::vector<bool>& scc_labels);

std::vector<bool> solve_backward(const ExplicitGame& g, const std::vector<bool>& scc_acc);
// Dual induction: states from which the environment forces a non-accepting SCC.
std::vector<bool> solve_env_backward(const ExplicitGame& g, const std::vector<bool>& scc_acc);
bool explicit_realizable(const ExplicitGame& g, const std::vector<bool>& win);

struct DelayViolation {
  std::uint32_t winning;  // a winning state
  std::uint32_t losing;   // a state the delay property forces into W
  std::string reason;
};
// Throws invalid_argument for non-separated games.
std::optional<DelayViolation> check_delay_property(const ExplicitGame& g, const std::vector<bool>& win);

// A pair of states in one SCC that the set separates, if any.
std::optional<std::pair<std::uint32_t, std::uint32_t>> saturation_violation(const ExplicitGame& g,
                                                                             const std::vector<bool>& set);

// Nontrivial product SCCs project onto SCCs of the component graphs.
bool check_scc_product_structure(const ExplicitGame& g, std::string* why = nullptr);

struct Verdict {
  bool ok = true;
  std::string message;
  std::size_t explored = 0;
};

Verdict model_check_controller(const ExplicitGame& g, const SpecModel& spec, const Controller& ctrl,
                               std::size_t cap = std::size_t{1} << 20);
// W and the environment region partition the state space.
Verdict check_env_spoiling(const ExplicitGame& g, const std::vector<bool>& win, const std::vector<bool>& env_win);

// Evaluates a symbolic state set at every explicit state.
std::vector<bool> explicit_set(const ExplicitGame& g, const dd::Manager& m, const std::vector<dd::VarId>& cur,
                               const dd::Bdd& set);

}  // namespace sgrk
