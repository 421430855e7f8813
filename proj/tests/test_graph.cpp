#include <algorithm>
#include <set>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "sgrk/graph.hpp"
#include "sgrk/oracle.hpp"
#include "sgrk/random_games.hpp"
#include "sgrk/spec.hpp"

using namespace sgrk;

namespace {

// Evaluates a relation over (X, X') at explicit states s, t.
bool rel(const SymbolicGame& g, const ExplicitGame& eg, const dd::Bdd& r, std::uint32_t s, std::uint32_t t) {
  std::vector<bool> all(g.mgr->registry().var_count());
  auto a = eg.state_values(s), b = eg.state_values(t);
  for (std::size_t k = 0; k < g.cur.size(); ++k) {
    all[g.cur[k]] = a[k];
    all[g.next[k]] = b[k];
  }
  return g.mgr->eval(r, all);
}

// Reflexive-transitive closure by repeated squaring of a boolean matrix.
std::vector<std::vector<bool>> closure(const std::vector<std::vector<std::uint32_t>>& succ) {
  const std::size_t n = succ.size();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n));
  for (std::size_t s = 0; s < n; ++s) {
    r[s][s] = true;
    for (auto t : succ[s]) r[s][t] = true;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!r[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) r[i][j] = r[i][j] || r[k][j];
    }
  }
  return r;
}

}  // namespace

TEST_CASE("reach of the three-mode input system") {
  SymbolicGame g = compile(fixtures::modes());
  dd::Manager& m = *g.mgr;
  VarFrame f = VarFrame::of(m.registry(), dd::Role::input);
  dd::Bdd reach = build_reach(m, f, g.rho_i);
  std::vector<std::pair<std::string, std::string>> expected{{"00", "00"}, {"00", "01"}, {"00", "10"},
                                                            {"01", "01"}, {"10", "10"}, {"11", "11"}};
  for (unsigned s = 0; s < 4; ++s) {
    for (unsigned t = 0; t < 4; ++t) {
      std::vector<bool> all(m.registry().var_count());
      for (std::size_t k = 0; k < 2; ++k) {
        all[f.cur[k]] = (s >> (1 - k)) & 1;
        all[f.next[k]] = (t >> (1 - k)) & 1;
      }
      std::string a = std::to_string(s >> 1) + std::to_string(s & 1), b = std::to_string(t >> 1) + std::to_string(t & 1);
      bool want = std::find(expected.begin(), expected.end(), std::make_pair(a, b)) != expected.end();
      CHECK_MESSAGE(m.eval(reach, all) == want, a << "->" << b);
    }
  }
}

TEST_CASE("chain and self-loop closures") {
  SymbolicGame chain = compile(parse_spec_text(
      "INPUT_VARS: i\nOUTPUT_VARS: p q\n"
      "TRANS_SYS: (!p & !q -> !p' & q') & (!p & q -> p' & !q') & (p & !q -> p' & q') & (p & q -> p' & q')\n"));
  dd::Manager& m = *chain.mgr;
  VarFrame f = VarFrame::of(m.registry(), dd::Role::output);
  dd::Bdd reach = build_reach(m, f, chain.rho_o);
  std::vector<dd::VarId> both = f.cur;
  both.insert(both.end(), f.next.begin(), f.next.end());
  CHECK(m.sat_count(reach, both) == 10);

  SymbolicGame loop = compile(parse_spec_text("INPUT_VARS: i\nOUTPUT_VARS: o\nINIT_SYS: o\nTRANS_SYS: o & o'\n"
                                              "  | !o & !o'\n"));
  GraphPredicates p = build_graph(*loop.mgr, VarFrame::of(loop.mgr->registry(), dd::Role::output), loop.rho_o);
  CHECK(p.terminal.is_true());
}

TEST_CASE("SCCs and terminal SCCs match explicit Tarjan") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    RandomGameParams params;
    params.max_vars = 6;
    SpecModel spec = random_separated_grk(seed, params);
    SymbolicGame g = compile(spec);
    GraphPredicates p = build_graph(g);
    ExplicitGame eg = enumerate_game(spec);
    auto r = closure(eg.succ);
    for (std::uint32_t s = 0; s < eg.num_states; ++s) {
      for (std::uint32_t t = 0; t < eg.num_states; ++t) {
        REQUIRE(rel(g, eg, p.reach, s, t) == r[s][t]);
        REQUIRE(rel(g, eg, p.scc, s, t) == (eg.scc_id[s] == eg.scc_id[t]));
      }
    }
    std::vector<bool> terminal = explicit_set(eg, *g.mgr, g.cur, p.terminal);
    for (std::uint32_t s = 0; s < eg.num_states; ++s) {
      bool closed = true;
      for (std::uint32_t t = 0; t < eg.num_states; ++t) closed = closed && (!r[s][t] || r[t][s]);
      CHECK(terminal[s] == closed);
    }
  }
}

TEST_CASE("three-mode product: SCC classes and terminal states") {
  SpecModel spec = fixtures::modes();
  SymbolicGame g = compile(spec);
  GraphPredicates p = build_graph(g);
  ExplicitGame eg = enumerate_game(spec);
  using fixtures::idx;
  const std::vector<std::string> valid{"00", "01", "10"};
  std::set<std::uint32_t> classes;
  for (const auto& t : valid) {
    for (const auto& a : valid) classes.insert(eg.scc_id[idx(t, a)]);
  }
  // Input 00 is left at once, so its three product states are singletons.
  CHECK(classes.size() == 7);
  CHECK(eg.scc_id[idx("01", "00")] == eg.scc_id[idx("01", "01")]);
  CHECK(eg.scc_id[idx("10", "00")] == eg.scc_id[idx("10", "01")]);
  CHECK(eg.scc_id[idx("00", "00")] != eg.scc_id[idx("00", "01")]);

  std::vector<bool> terminal = explicit_set(eg, *g.mgr, g.cur, p.terminal);
  std::set<std::string> term;
  for (const auto& t : valid) {
    for (const auto& a : valid) {
      if (terminal[idx(t, a)]) term.insert(t + a);
    }
  }
  CHECK(term == std::set<std::string>{"0110", "1010"});

  // dc_step from nothing yields the terminal SCCs; the full set is a fixpoint.
  VarFrame f = VarFrame::all(g.mgr->registry());
  CHECK(dc_step(*g.mgr, f, p, g.mgr->zero(), true) == p.terminal);
  CHECK(dc_step(*g.mgr, f, p, g.mgr->one(), true).is_true());
}

TEST_CASE("dc_step on a two-SCC chain") {
  SymbolicGame g = compile(parse_spec_text("INPUT_VARS: i\nOUTPUT_VARS: o\nTRANS_SYS: o -> o'\n"));
  GraphPredicates p = build_graph(*g.mgr, VarFrame::of(g.mgr->registry(), dd::Role::output), g.rho_o);
  VarFrame f = VarFrame::of(g.mgr->registry(), dd::Role::output);
  dd::Bdd b = g.mgr->var("o");
  CHECK(p.terminal == b);
  CHECK(dc_step(*g.mgr, f, p, b, true).is_true());
  // A set that splits an SCC is rejected when checking.
  SymbolicGame two = compile(parse_spec_text("INPUT_VARS: i\nOUTPUT_VARS: o\nTRANS_SYS: o' <-> !o\n"));
  VarFrame f2 = VarFrame::of(two.mgr->registry(), dd::Role::output);
  GraphPredicates p2 = build_graph(*two.mgr, f2, two.rho_o);
  CHECK(saturation_witness(*two.mgr, f2, p2.scc, two.mgr->var("o")).has_value());
  CHECK_THROWS(dc_step(*two.mgr, f2, p2, two.mgr->var("o"), true));
}
