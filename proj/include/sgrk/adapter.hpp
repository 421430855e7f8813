#pragma once

// Explicit transducers, their projection to transition systems, and the
// adapter construction Adaptee^-1 . Controller . Target.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sgrk/grk.hpp"
#include "sgrk/spec.hpp"

namespace sgrk {

struct Transition {
  std::string src, input, output, dst;
};

// Deterministic, possibly partial machine. Outputs are bitstrings over `vars`
// when `vars` is non-empty, and free-form symbols otherwise.
struct Transducer {
  std::vector<std::string> vars;
  std::vector<std::string> states;
  std::string initial;
  std::optional<std::string> init_output;  // output before the first input
  std::vector<Transition> transitions;

  std::set<std::string> input_alphabet() const;
  std::set<std::string> output_alphabet() const;
  const Transition* step(const std::string& state, const std::string& input) const;
};

// Format:
//   VARS: t1 t0            (optional)
//   STATE s0 initial
//   INIT_OUTPUT 00         (optional)
//   TRANS s0 --U/01--> s1
Transducer parse_transducer(std::string_view text);
std::string print_transducer(const Transducer& t);
// Throws invalid_argument on nondeterminism or unknown states; drops unreachable states.
void check_and_trim(Transducer& t);

struct TransitionSystem {
  std::vector<std::string> vars;
  std::set<std::string> states;  // bitstrings over vars
  std::set<std::string> initial;
  std::set<std::pair<std::string, std::string>> edges;
  // Labels emitted from more than one transducer state with differing successors.
  std::vector<std::string> collisions;
};

// Label-keyed quotient: one state per emitted label (plus the initial output
// when declared); u -> v when a transition labelled v can follow one labelled u.
TransitionSystem project(const Transducer& t);

// Game over the input system (environment) and the output system (system)
// with the GR(k) condition of `grk`. Assignments outside a system's states
// keep a self-loop so that neither player deadlocks.
SpecModel game_from_projections(const TransitionSystem& input, const TransitionSystem& output, const SpecModel& grk);

// Cascade product: `g` reads first and `f` reads g's outputs.
Transducer compose(const Transducer& f, const Transducer& g);
// Swaps input and output labels; throws not_invertible when a state has two
// transitions with the same output.
Transducer invert(const Transducer& t);
bool isomorphic(const Transducer& a, const Transducer& b);

// Reads Target inputs and emits Adaptee inputs. The controller must be
// synthesized for game_from_projections(project(target), project(adaptee), ...).
Transducer assemble_adapter(const Transducer& target, const Transducer& adaptee, const Controller& ctrl);

struct ConjunctTally {
  // Cycle positions satisfying each assumption and guarantee.
  std::vector<std::size_t> assumption_counts, guarantee_counts;
  bool satisfied = true;
};

struct CosimResult {
  // (target output, adaptee output) per step, starting with the initial outputs.
  std::vector<std::pair<std::string, std::string>> trace;
  std::size_t cycle_start = 0;  // trace entries after this index form the induced cycle
  std::vector<ConjunctTally> conjuncts;
  bool satisfied = true;
};

// Runs Target and Adaptee . Adapter on the lasso prefix . loop^omega until
// the joint state repeats at a loop boundary, then evaluates every
// GF -> GF conjunct of `grk` on the induced cycle. An empty loop runs the
// prefix once and reports no cycle. Throws illegal_input when a machine has
// no move.
CosimResult cosimulate(const Transducer& target, const Transducer& adaptee, const Transducer& adapter,
                       const SpecModel& grk, const std::vector<std::string>& prefix,
                       const std::vector<std::string>& loop);

}  // namespace sgrk
