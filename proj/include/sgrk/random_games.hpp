#pragma once

#include <cstdint>
#include <random>

#include "sgrk/formula.hpp"
#include "sgrk/spec.hpp"

namespace sgrk {

struct RandomGameParams {
  std::size_t min_vars = 2;
  std::size_t max_vars = 10;
};

// Separated game structure with random cube relations (density 0.2-0.8 per
// player, deadlocks repaired with self-loops) and a random GR(k) condition,
// k in 0..3, n_l and m_l in 0..2.
SpecModel random_separated_grk(std::uint64_t seed, const RandomGameParams& params = {});

struct RandomWeakBuchi {
  SpecModel spec;  // conjuncts are empty
  ExprPtr acc;     // a union of SCCs, as a DNF of states
  bool separated = true;
};

// Separated structures use up to params.max_vars variables; general ones,
// whose relations read the whole state, at most 6.
RandomWeakBuchi random_weak_buchi(std::uint64_t seed, bool separated, const RandomGameParams& params = {});

// State minterm over the given variables (first variable is the most significant bit of `bits`).
ExprPtr minterm(const std::vector<std::string>& vars, std::uint64_t bits, bool primed = false);

}  // namespace sgrk
