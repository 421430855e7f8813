#include "doctest.h"
#include "fixtures.hpp"
#include "sgrk/error.hpp"
#include "sgrk/oracle.hpp"
#include "sgrk/random_games.hpp"
#include "sgrk/solvers.hpp"
#include "sgrk/spec.hpp"

using namespace sgrk;

TEST_CASE("reachability against a blocking environment") {
  // The environment may keep i low forever once it is low.
  SymbolicGame g = compile(parse_spec_text("INPUT_VARS: i\nOUTPUT_VARS: o\nTRANS_ENV: !i -> !i'\n"));
  dd::Manager& m = *g.mgr;
  dd::Bdd i = m.var("i"), o = m.var("o");
  SubgameResult r = solve_reachability(g, m.one(), i);
  CHECK(r.win == i);
  // Reaching o is up to the system.
  SubgameResult r2 = solve_reachability(g, m.one(), o);
  CHECK(r2.win.is_true());
  CHECK(r2.iterations == 2);
  // The result is clipped to the source.
  SubgameResult r3 = solve_reachability(g, !i, o);
  CHECK(r3.win == !i);
}

TEST_CASE("safety") {
  SymbolicGame g = compile(parse_spec_text("INPUT_VARS: i\nOUTPUT_VARS: o\nTRANS_SYS: o -> o'\n"));
  dd::Manager& m = *g.mgr;
  dd::Bdd i = m.var("i"), o = m.var("o");
  CHECK(solve_safety(g, m.one(), o).win == o);
  CHECK(solve_safety(g, m.one(), !o).win == !o);
  // Staying inside i is up to the environment.
  CHECK(solve_safety(g, m.one(), i).win.is_false());
  SubgameResult s = solve_safety(g, o, o);
  CHECK(s.strat == (o & g.rho_i & g.rho_o & m.var(g.out_next[0])));
}

TEST_CASE("weak Buchi with constant acceptance") {
  SymbolicGame g = compile(fixtures::modes());
  CHECK(solve_weak_buchi(g, g.mgr->one()).win.is_true());
  CHECK(solve_weak_buchi(g, g.mgr->zero()).win.is_false());
  CHECK(check_realizable(g, g.mgr->one()));
  CHECK_FALSE(check_realizable(g, g.mgr->zero()));
}

TEST_CASE("acceptance that splits an SCC is rejected") {
  SymbolicGame g = compile(fixtures::modes());
  dd::Manager& m = *g.mgr;
  // Adaptee states 00 and 01 form one SCC.
  dd::Bdd acc = (!m.var("a1")) & (!m.var("a0"));
  try {
    solve_weak_buchi(g, acc);
    FAIL("expected not_weak");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_weak);
  }
}

TEST_CASE("layers partition the state space") {
  SymbolicGame g = compile(fixtures::modes());
  WeakBuchiSolution sol = solve_weak_buchi(g, g.mgr->var("t1"));
  std::uint64_t total = 0;
  for (auto n : sol.layer_states) total += n;
  CHECK(total == g.state_space_size());
  CHECK(sol.iteration_ops.size() == sol.iterations + 1);
  CHECK(sol.ops_used > 0);
}

TEST_CASE("unrealizable gadget") {
  SymbolicGame g = compile(parse_spec_text(
      "INPUT_VARS: i\nOUTPUT_VARS: o\nINIT_SYS: !o\nTRANS_SYS: !o'\nGRK:\n  ASSUME: GF(i)\n  GUARANTEE: GF(o)\n"));
  dd::Manager& m = *g.mgr;
  // The environment cannot avoid i forever and the system never raises o:
  // acceptance is the set of states whose SCC never shows i, i.e. none.
  dd::Bdd acc = m.zero();
  WeakBuchiSolution sol = solve_weak_buchi(g, acc);
  CHECK_FALSE(check_realizable(g, sol.win));
}

TEST_CASE("random weak Buchi games agree with explicit induction") {
  for (std::uint64_t seed = 100; seed < 160; ++seed) {
    RandomGameParams params;
    params.max_vars = 7;
    RandomWeakBuchi rw = random_weak_buchi(seed, seed % 2 == 0, params);
    CompileOptions co;
    co.allow_non_separated = !rw.separated;
    SymbolicGame g = build_game(rw.spec, co);
    dd::Bdd acc = to_bdd(*g.mgr, rw.acc);
    WeakBuchiSolution sol = solve_weak_buchi(g, acc);
    ExplicitGame eg = enumerate_game(rw.spec, std::size_t{1} << 20);
    std::vector<bool> states = explicit_set(eg, *g.mgr, g.cur, acc);
    std::vector<bool> want = solve_backward(eg, acc_labels_from_states(eg, states));
    CHECK_MESSAGE(want == explicit_set(eg, *g.mgr, g.cur, sol.win), "seed " << seed);
    std::vector<bool> env = solve_env_backward(eg, acc_labels_from_states(eg, states));
    CHECK(check_env_spoiling(eg, want, env).ok);
  }
}
