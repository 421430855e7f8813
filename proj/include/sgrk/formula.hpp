#pragma once

// Propositional formulas over declared variables and their primed copies.
//
// Grammar (lowest precedence first):
//   iff     := implies ("<->" implies)*          left associative
//   implies := or ("->" implies)?                right associative
//   or      := and ("|" and)*
//   and     := unary ("&" unary)*
//   unary   := "!" unary | "(" iff ")" | "true" | "false" | ident "'"?

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sgrk/dd.hpp"

namespace sgrk {

enum class ExprKind : std::uint8_t { constant, var, negation, conj, disj, implies, iff };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind = ExprKind::constant;
  bool value = false;      // constant
  std::string name;        // var
  bool primed = false;     // var
  std::vector<ExprPtr> args;
};

ExprPtr mk_const(bool value);
ExprPtr mk_var(std::string name, bool primed = false);
ExprPtr mk_lit(std::string name, bool positive, bool primed = false);
ExprPtr mk_not(ExprPtr a);
// Empty conjunction is true, empty disjunction false; a single argument is returned as is.
ExprPtr mk_and(std::vector<ExprPtr> args);
ExprPtr mk_or(std::vector<ExprPtr> args);
ExprPtr mk_implies(ExprPtr a, ExprPtr b);
ExprPtr mk_iff(ExprPtr a, ExprPtr b);

// `line` and `column` locate the text inside a larger document for error messages.
ExprPtr parse_formula(std::string_view text, int line = 1, int column = 1);
std::string to_string(const ExprPtr& e);
bool equal(const ExprPtr& a, const ExprPtr& b);

struct Atom {
  std::string name;
  bool primed;
  friend bool operator<(const Atom& a, const Atom& b) {
    return a.name != b.name ? a.name < b.name : a.primed < b.primed;
  }
  friend bool operator==(const Atom& a, const Atom& b) {
    return a.name == b.name && a.primed == b.primed;
  }
};

// Syntactic atoms, sorted and deduplicated.
std::vector<Atom> atoms(const ExprPtr& e);
bool mentions_primed(const ExprPtr& e);

// Replaces every unprimed atom by its primed copy; throws if already primed.
ExprPtr prime(const ExprPtr& e);

dd::Bdd to_bdd(dd::Manager& mgr, const ExprPtr& e);

// Postfix bytecode evaluator that does not touch decision diagrams; used by
// the explicit oracle.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  // `slot` maps each atom to an index into the evaluation vector; it should
  // throw for atoms that are not allowed.
  CompiledExpr(const ExprPtr& e, const std::function<std::size_t(const Atom&)>& slot);

  bool eval(const std::vector<bool>& slots) const;
  // Same, with slots packed into a bit mask (slot k is bit k).
  bool eval_bits(std::uint64_t bits) const;

 private:
  std::vector<std::uint32_t> code_;
};

}  // namespace sgrk
