#include <functional>

#include "doctest.h"
#include "fixtures.hpp"
#include "sgrk/adapter.hpp"
#include "sgrk/error.hpp"
#include "sgrk/oracle.hpp"

using namespace sgrk;

namespace {

Transducer target() { return parse_transducer(fixtures::read("target.tx")); }
Transducer adaptee() { return parse_transducer(fixtures::read("adaptee.tx")); }

struct Pipeline {
  Transducer t = target(), a = adaptee();
  SpecModel grk = fixtures::modes();
  SymbolicGame g;
  SolveResult r;
  Transducer adapter;
  Pipeline() : g(compile(game_from_projections(project(t), project(a), grk))), r(solve(g)) {
    adapter = assemble_adapter(t, a, *r.controller);
  }
};

Transducer identity(const std::set<std::string>& alphabet, const std::vector<std::string>& vars) {
  Transducer id;
  id.vars = vars;
  id.states = {"q"};
  id.initial = "q";
  for (const auto& x : alphabet) id.transitions.push_back({"q", x, x, "q"});
  return id;
}

}  // namespace

TEST_CASE("transducer text round trip") {
  Transducer t = target();
  CHECK(t.vars == std::vector<std::string>{"t1", "t0"});
  CHECK(t.initial == "s0");
  CHECK(t.init_output == std::optional<std::string>("00"));
  CHECK(t.input_alphabet() == std::set<std::string>{"U", "D", "S"});
  CHECK(t.output_alphabet() == std::set<std::string>{"01", "10"});
  Transducer back = parse_transducer(print_transducer(t));
  CHECK(print_transducer(back) == print_transducer(t));
  CHECK(isomorphic(back, t));
  CHECK(t.step("s1", "S")->dst == "s1");
  CHECK(t.step("s1", "U") == nullptr);
  CHECK_THROWS_AS(parse_transducer("STATE s0 initial\nTRANS s0 -U/1-> s0\n"), Error);
  CHECK_THROWS_AS(parse_transducer("STATE s0 initial\nTRANS s0 --U/1--> s9\n"), Error);
}

TEST_CASE("projections are the three-mode input and output systems") {
  SpecModel game = game_from_projections(project(target()), project(adaptee()), fixtures::modes());
  ExplicitGame got = enumerate_game(game), want = enumerate_game(fixtures::modes());
  CHECK(got.env_graph == want.env_graph);
  CHECK(got.sys_graph == want.sys_graph);
  CHECK(got.init_env == want.init_env);
  CHECK(got.init_sys == want.init_sys);
  CHECK(project(target()).collisions.empty());
  TransitionSystem ta = project(adaptee());
  CHECK(ta.states == std::set<std::string>{"00", "01", "10"});
  CHECK(ta.initial == std::set<std::string>{"00"});
  CHECK(ta.edges.count({"01", "00"}) == 1);
}

TEST_CASE("inversion and composition") {
  for (const Transducer& t : {target(), adaptee()}) {
    // Inversion forgets the output variables and the initial output.
    Transducer twice = invert(invert(t));
    CHECK_FALSE(twice.init_output);
    twice.init_output = t.init_output;
    CHECK(isomorphic(twice, t));
    Transducer id = identity(t.output_alphabet(), t.vars);
    id.init_output = t.init_output;
    CHECK(isomorphic(compose(id, t), t));
  }
  Transducer a = adaptee(), b = invert(adaptee()), c = target();
  CHECK(isomorphic(compose(compose(a, b), c), compose(a, compose(b, c))));
  CHECK_FALSE(isomorphic(target(), adaptee()));

  Transducer bad = parse_transducer("STATE s0 initial\nSTATE s1\nTRANS s0 --x/1--> s0\nTRANS s0 --y/1--> s1\n");
  try {
    invert(bad);
    FAIL("expected not_invertible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_invertible);
  }
}

TEST_CASE("adapter for the three-mode example") {
  Pipeline p;
  REQUIRE(p.r.realizable);
  CHECK(p.adapter.states.size() == 7);
  CHECK(p.adapter.input_alphabet() == std::set<std::string>{"U", "D", "S"});
  for (const auto& x : p.adapter.output_alphabet()) CHECK(p.a.input_alphabet().count(x) == 1);

  CosimResult up = cosimulate(p.t, p.a, p.adapter, p.grk, {"U"}, {"S"});
  CHECK(up.satisfied);
  CHECK(up.trace.front() == std::make_pair(std::string("00"), std::string("00")));
  CHECK(up.trace.back().first == "01");
  CosimResult down = cosimulate(p.t, p.a, p.adapter, p.grk, {"D"}, {"S"});
  CHECK(down.satisfied);
  CHECK(down.trace.back() == std::make_pair(std::string("10"), std::string("10")));
  REQUIRE(down.conjuncts.size() == 3);
  CHECK(down.conjuncts[2].assumption_counts[0] > 0);
  CHECK(down.conjuncts[2].guarantee_counts[0] > 0);
  CHECK_THROWS_AS(cosimulate(p.t, p.a, p.adapter, p.grk, {"S"}, {"S"}), Error);
}

TEST_CASE("the adapted adaptee follows every bounded target word") {
  Pipeline p;
  Transducer chain = compose(p.a, p.adapter);
  std::size_t words = 0;
  std::function<void(const std::string&, const std::string&, std::size_t)> walk =
      [&](const std::string& ts, const std::string& cs, std::size_t depth) {
        ++words;
        if (depth == 12) return;
        for (const auto& x : p.t.input_alphabet()) {
          const Transition* tt = p.t.step(ts, x);
          if (!tt) continue;
          const Transition* ct = chain.step(cs, x);
          REQUIRE_MESSAGE(ct, "adapted adaptee stuck at depth " << depth);
          walk(tt->dst, ct->dst, depth + 1);
        }
      };
  walk(p.t.initial, chain.initial, 0);
  CHECK(words == 25);
}
