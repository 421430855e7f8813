#pragma once

// Explicit strategy tables ("stratjson v1") and controller replay.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "sgrk/grk.hpp"
#include "sgrk/spec.hpp"

namespace sgrk {

inline constexpr std::size_t kMaxStrategyRows = std::size_t{1} << 20;

struct StrategyRow {
  std::size_t mem = 0;
  std::string state;   // bits over inputs then outputs
  std::string input;   // next input
  std::string output;  // next output
  std::size_t mem_next = 0;
};

struct StrategyTable {
  std::vector<std::string> inputs, outputs;
  std::size_t mem_bound = 1;
  // Legal initial inputs and the controller's initial output for each.
  std::vector<std::pair<std::string, std::string>> initial;
  // Sorted by (mem, state, input); unique keys.
  std::vector<StrategyRow> rows;

  const StrategyRow* find(std::size_t mem, const std::string& state, const std::string& input) const;
  const std::string* initial_output(const std::string& input) const;
};

// Rows for every (mem, state, input) reachable under the controller from the
// initial states. Throws export_too_large past `limit` rows.
StrategyTable tabulate(const Controller& ctrl, std::size_t limit = kMaxStrategyRows);

std::string write_stratjson(const StrategyTable& table);
// Throws syntax on malformed documents.
StrategyTable read_stratjson(std::string_view text);

enum class EnvMode { random, adversarial, script };

struct SimulationOptions {
  EnvMode env = EnvMode::random;
  std::size_t steps = 100;
  std::uint64_t seed = 0;
  // For EnvMode::script: the initial input followed by one input per step.
  std::vector<std::vector<bool>> script;
};

struct TraceStep {
  std::size_t mem = 0;
  std::string state;
  std::string input;
  std::string output;
};

struct SimulationResult {
  bool ok = true;
  std::string violation;
  std::vector<TraceStep> trace;  // trace[0] is the initial state
};

// Replays the table against an environment and checks every step against
// the game's assertions.
SimulationResult simulate(const SymbolicGame& g, const StrategyTable& table, const SimulationOptions& options);

// Inputs legal at `state` (all inputs when state is empty: legal initial inputs).
std::vector<std::vector<bool>> legal_inputs(const SymbolicGame& g, const std::vector<bool>& state);

}  // namespace sgrk
