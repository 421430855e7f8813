#include <random>

#include "doctest.h"
#include "sgrk/dd.hpp"
#include "sgrk/error.hpp"

using namespace sgrk;
using namespace sgrk::dd;

namespace {

Manager make_manager(int n) {
  VarRegistry reg;
  for (int k = 0; k < n; ++k) reg.declare("x" + std::to_string(k), k % 2 ? Role::output : Role::input);
  return Manager(std::move(reg));
}

// Random formula over the current copies, returned with its truth table.
struct Tt {
  Bdd f;
  std::vector<bool> table;
};

Tt random_formula(Manager& m, std::mt19937& rng, int nvars, int depth) {
  const std::size_t rows = std::size_t{1} << nvars;
  if (depth == 0 || rng() % 4 == 0) {
    int v = static_cast<int>(rng() % nvars);
    Tt t{m.var(VarRegistry::var(v, Copy::current)), std::vector<bool>(rows)};
    for (std::size_t r = 0; r < rows; ++r) t.table[r] = (r >> v) & 1;
    return t;
  }
  Tt a = random_formula(m, rng, nvars, depth - 1);
  Tt b = random_formula(m, rng, nvars, depth - 1);
  Tt out{{}, std::vector<bool>(rows)};
  switch (rng() % 5) {
    case 0:
      out.f = a.f & b.f;
      for (std::size_t r = 0; r < rows; ++r) out.table[r] = a.table[r] && b.table[r];
      break;
    case 1:
      out.f = a.f | b.f;
      for (std::size_t r = 0; r < rows; ++r) out.table[r] = a.table[r] || b.table[r];
      break;
    case 2:
      out.f = a.f.implies(b.f);
      for (std::size_t r = 0; r < rows; ++r) out.table[r] = !a.table[r] || b.table[r];
      break;
    case 3:
      out.f = a.f.iff(b.f);
      for (std::size_t r = 0; r < rows; ++r) out.table[r] = a.table[r] == b.table[r];
      break;
    default:
      out.f = !a.f;
      for (std::size_t r = 0; r < rows; ++r) out.table[r] = !a.table[r];
      break;
  }
  return out;
}

std::vector<bool> assignment(const Manager& m, int nvars, std::size_t row) {
  std::vector<bool> values(m.registry().var_count(), false);
  for (int v = 0; v < nvars; ++v) values[VarRegistry::var(v, Copy::current)] = (row >> v) & 1;
  return values;
}

}  // namespace

TEST_CASE("variables evaluate and unknown names are rejected") {
  VarRegistry reg;
  reg.declare("x", Role::input);
  Manager m(std::move(reg));
  Bdd x = m.var("x");
  std::vector<bool> vals(m.registry().var_count(), false);
  CHECK_FALSE(m.eval(x, vals));
  vals[m.registry().lookup("x")] = true;
  CHECK(m.eval(x, vals));
  CHECK(m.registry().lookup("x'") == VarRegistry::var(0, Copy::next));
  CHECK(m.registry().lookup("x''") == VarRegistry::var(0, Copy::aux));
  try {
    m.var("y");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unknown_variable);
  }
}

TEST_CASE("canonical identities") {
  Manager m = make_manager(2);
  Bdd x = m.var("x0"), y = m.var("x1");
  CHECK((x & !x).is_false());
  CHECK((x | !x).is_true());
  CHECK((x & y) == (y & x));
  CHECK((!(x & y)) == ((!x) | (!y)));
  CHECK(m.ite(x, y, m.zero()) == (x & y));
}

TEST_CASE("quantification") {
  Manager m = make_manager(2);
  Bdd x = m.var("x0"), y = m.var("x1");
  std::vector<VarId> vx{m.registry().lookup("x0")};
  CHECK(m.exists(vx, x & y) == y);
  CHECK(m.forall(vx, x | y) == y);
  CHECK(m.forall(vx, x & y).is_false());
  std::vector<VarId> both{vx[0], m.registry().lookup("x1")};
  CHECK(m.and_exists(x, y, vx) == y);
  CHECK(m.and_exists(x, !x, both).is_false());
}

TEST_CASE("renaming") {
  VarRegistry reg;
  reg.declare("v", Role::input);
  reg.declare("w", Role::output);
  Manager m(std::move(reg));
  const auto& r = m.registry();
  Bdd f = m.var("v") & !m.var("w");
  Bdd g = m.rename(f, Renaming::shift(r, Copy::current, Copy::next));
  CHECK(g == (m.var("v'") & !m.var("w'")));
  CHECK(m.rename(g, Renaming::shift(r, Copy::next, Copy::current)) == f);

  // v <-> w swap; the renamed diagram is not order compatible with the input.
  Renaming swap({{r.lookup("v"), r.lookup("w")}, {r.lookup("w"), r.lookup("v")}});
  CHECK(m.rename(m.var("v") & m.var("w'"), swap) == (m.var("w") & m.var("w'")));
  Renaming swap_all({{r.lookup("v"), r.lookup("w")},
                     {r.lookup("w"), r.lookup("v")},
                     {r.lookup("v'"), r.lookup("w'")},
                     {r.lookup("w'"), r.lookup("v'")}});
  CHECK(m.rename(m.var("v") & m.var("w'"), swap_all) == (m.var("w") & m.var("v'")));

  Renaming bad({{r.lookup("v"), r.lookup("w")}});
  try {
    m.rename(m.var("v") & m.var("w"), bad);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_argument);
  }
}

TEST_CASE("counting and picking") {
  Manager m = make_manager(3);
  const auto& r = m.registry();
  std::vector<VarId> cur = r.vars(Copy::current);
  Bdd f = m.var("x0") | m.var("x2");
  CHECK(m.sat_count(f, cur) == 6);
  CHECK(m.sat_count(m.one(), cur) == 8);
  CHECK(m.sat_count(m.zero(), cur) == 0);
  auto pick = m.pick_one(f, cur);
  REQUIRE(pick);
  CHECK(*pick == std::vector<bool>{false, false, true});
  CHECK_FALSE(m.pick_one(m.zero(), cur));
  auto all = m.enumerate(f, cur, 100);
  CHECK(all.size() == 6);
  CHECK(all.front() == std::vector<bool>{false, false, true});
  CHECK_THROWS_AS(m.enumerate(f, cur, 3), Error);
}

TEST_CASE("op counter counts calls") {
  Manager m = make_manager(2);
  Bdd x = m.var("x0"), y = m.var("x1");
  m.reset_op_count();
  Bdd a = x & y;
  Bdd b = !a;
  std::vector<VarId> vx{m.registry().lookup("x0")};
  Bdd c = m.exists(vx, b);
  (void)m.sat_count(c, m.registry().vars(Copy::current));
  CHECK(m.op_count() == 3);
}

TEST_CASE("random formulas agree with truth tables") {
  std::mt19937 rng(7);
  for (int round = 0; round < 40; ++round) {
    int nvars = 1 + static_cast<int>(rng() % 5);
    Manager m = make_manager(nvars);
    Tt a = random_formula(m, rng, nvars, 5);
    Tt b = random_formula(m, rng, nvars, 5);
    std::size_t rows = std::size_t{1} << nvars;
    for (std::size_t row = 0; row < rows; ++row) {
      CHECK(m.eval(a.f, assignment(m, nvars, row)) == a.table[row]);
    }
    CHECK((a.table == b.table) == (a.f == b.f));
    CHECK((!(a.f | b.f)) == ((!a.f) & (!b.f)));
    std::vector<VarId> q{VarRegistry::var(rng() % nvars, Copy::current)};
    CHECK(m.forall(q, a.f) == !m.exists(q, !a.f));
    std::uint64_t count = 0;
    for (bool t : a.table) count += t;
    CHECK(m.sat_count(a.f, m.registry().vars(Copy::current)) == count);
  }
}

TEST_CASE("garbage collection and reordering preserve diagrams") {
  VarRegistry reg;
  for (int k = 0; k < 6; ++k) reg.declare("a" + std::to_string(k), Role::input);
  for (int k = 0; k < 6; ++k) reg.declare("b" + std::to_string(k), Role::output);
  Manager m(std::move(reg));
  Bdd f = m.zero();
  for (int k = 0; k < 6; ++k) f |= m.var("a" + std::to_string(k)) & m.var("b" + std::to_string(k));
  std::vector<VarId> cur = m.registry().vars(Copy::current);
  std::uint64_t before = m.sat_count(f, cur);
  std::size_t size_before = m.node_count(f);
  m.collect_garbage();
  m.reorder();
  CHECK(m.sat_count(f, cur) == before);
  CHECK(m.node_count(f) <= size_before);
  Bdd g = m.zero();
  for (int k = 0; k < 6; ++k) g |= m.var("a" + std::to_string(k)) & m.var("b" + std::to_string(k));
  CHECK(f == g);
}
