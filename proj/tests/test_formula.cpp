#include <random>

#include "doctest.h"
#include "sgrk/error.hpp"
#include "sgrk/formula.hpp"

using namespace sgrk;

namespace {

ExprPtr random_expr(std::mt19937& rng, int depth) {
  static const char* names[] = {"p", "q", "r"};
  if (depth == 0 || rng() % 4 == 0) {
    if (rng() % 8 == 0) return mk_const(rng() % 2);
    return mk_var(names[rng() % 3], rng() % 2);
  }
  ExprPtr a = random_expr(rng, depth - 1), b = random_expr(rng, depth - 1);
  switch (rng() % 5) {
    case 0: return mk_not(a);
    case 1: return mk_and({a, b});
    case 2: return mk_or({a, b});
    case 3: return mk_implies(a, b);
    default: return mk_iff(a, b);
  }
}

std::size_t slot(const Atom& a) {
  return static_cast<std::size_t>(a.name[0] - 'p') + (a.primed ? 3 : 0);
}

}  // namespace

TEST_CASE("precedence and associativity") {
  CHECK(to_string(parse_formula("a | b & c")) == "a | b & c");
  CHECK(to_string(parse_formula("(a | b) & c")) == "(a | b) & c");
  CHECK(to_string(parse_formula("a -> b -> c")) == "a -> b -> c");
  CHECK(to_string(parse_formula("(a -> b) -> c")) == "(a -> b) -> c");
  CHECK(to_string(parse_formula("a <-> b <-> c")) == "a <-> b <-> c");
  CHECK(to_string(parse_formula("a <-> (b <-> c)")) == "a <-> (b <-> c)");
  CHECK(to_string(parse_formula("!!x' & true")) == "!!x' & true");
  CHECK(to_string(parse_formula("in:clean_1 | out.v")) == "in:clean_1 | out.v");
  ExprPtr e = parse_formula("a -> b <-> c");
  CHECK(e->kind == ExprKind::iff);
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse_formula("a & (b | ", 3, 10);
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::syntax);
    CHECK(std::string(e.what()).rfind("3:", 0) == 0);
  }
  CHECK_THROWS_AS(parse_formula("a ''"), Error);
  CHECK_THROWS_AS(parse_formula("a b"), Error);
  CHECK_THROWS_AS(parse_formula(""), Error);
}

TEST_CASE("printing round-trips structurally") {
  std::mt19937 rng(7);
  for (int k = 0; k < 300; ++k) {
    ExprPtr e = random_expr(rng, 5);
    std::string text = to_string(e);
    ExprPtr back = parse_formula(text);
    CHECK(to_string(back) == text);
  }
}

TEST_CASE("compiled evaluation agrees with diagrams") {
  std::mt19937 rng(11);
  dd::VarRegistry reg;
  reg.declare("p", dd::Role::input);
  reg.declare("q", dd::Role::input);
  reg.declare("r", dd::Role::output);
  dd::Manager m(std::move(reg));
  for (int k = 0; k < 100; ++k) {
    ExprPtr e = random_expr(rng, 4);
    dd::Bdd b = to_bdd(m, e);
    CompiledExpr c(e, slot);
    for (std::uint64_t bits = 0; bits < 64; ++bits) {
      std::vector<bool> slots(6), all(m.registry().var_count());
      for (int s = 0; s < 6; ++s) {
        slots[s] = (bits >> s) & 1;
        dd::VarId v = dd::VarRegistry::var(s % 3, s < 3 ? dd::Copy::current : dd::Copy::next);
        all[v] = slots[s];
      }
      CHECK(c.eval(slots) == m.eval(b, all));
      CHECK(c.eval_bits(bits) == c.eval(slots));
    }
  }
}

TEST_CASE("atoms, priming and equality") {
  ExprPtr e = parse_formula("b' & a | a");
  auto at = atoms(e);
  REQUIRE(at.size() == 2);
  CHECK(at[0] == Atom{"a", false});
  CHECK(at[1] == Atom{"b", true});
  CHECK(mentions_primed(e));
  CHECK_THROWS_AS(prime(e), Error);
  CHECK(to_string(prime(parse_formula("a & !b"))) == "a' & !b'");
  CHECK(equal(parse_formula("a&b"), parse_formula("a & b")));
  CHECK_FALSE(equal(parse_formula("a & b"), parse_formula("b & a")));
}

TEST_CASE("unknown variables in diagrams") {
  dd::VarRegistry reg;
  reg.declare("p", dd::Role::input);
  dd::Manager m(std::move(reg));
  try {
    to_bdd(m, parse_formula("p & zz"));
    FAIL("expected unknown variable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unknown_variable);
  }
}
