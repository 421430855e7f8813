#pragma once

// LTL export in strict semantics:
//   theta_I -> (theta_O & (rho_O W !rho_I) & ((G rho_I) -> phi))
// with primed variables in transition assertions written as X v.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sgrk/spec.hpp"

namespace sgrk::ltl {

enum class Op { constant, atom, negation, conj, disj, implies, next, globally, finally, until, weak_until };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Op op = Op::constant;
  bool value = false;
  std::string name;
  std::vector<FormulaPtr> args;
};

// Grammar, loosest first: "->" (right), "|", "&", "U"/"W" (right), then
// prefix "!", "X", "G", "F", atoms, true/false and parentheses.
FormulaPtr parse(std::string_view text);
std::string to_string(const FormulaPtr& f);
bool equal(const FormulaPtr& a, const FormulaPtr& b);

FormulaPtr from_expr(const ExprPtr& e);
FormulaPtr export_spec(const SpecModel& spec);
std::string export_text(const SpecModel& spec);

// A lasso word: positions 0..size-1 followed by a jump back to loop_start.
// Each position assigns the spec's inputs then outputs.
struct Lasso {
  std::vector<std::vector<bool>> positions;
  std::size_t loop_start = 0;
};

// `vars` names the positions' entries.
bool evaluate(const FormulaPtr& f, const std::vector<std::string>& vars, const Lasso& word);

// Direct strict-semantics verdict of the game's winning condition on a play.
bool strict_semantics(const SpecModel& spec, const Lasso& word);

}  // namespace sgrk::ltl
