#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "sgrk/bench.hpp"
#include "sgrk/error.hpp"
#include "sgrk/ltl.hpp"
#include "sgrk/random_games.hpp"

using namespace sgrk;

namespace {

ltl::Lasso random_lasso(std::mt19937_64& rng, std::size_t width) {
  ltl::Lasso w;
  std::size_t len = 1 + rng() % 5;
  for (std::size_t p = 0; p < len; ++p) {
    std::vector<bool> pos(width);
    for (std::size_t k = 0; k < width; ++k) pos[k] = rng() & 1;
    w.positions.push_back(pos);
  }
  w.loop_start = rng() % len;
  return w;
}

std::vector<std::string> vars_of(const SpecModel& s) {
  std::vector<std::string> v = s.inputs;
  v.insert(v.end(), s.outputs.begin(), s.outputs.end());
  return v;
}

}  // namespace

TEST_CASE("parser precedence") {
  auto f = ltl::parse("a -> b | c & d U e");
  CHECK(ltl::to_string(f) == "a -> b | c & d U e");
  CHECK(f->op == ltl::Op::implies);
  CHECK(f->args[1]->op == ltl::Op::disj);
  CHECK(f->args[1]->args[1]->op == ltl::Op::conj);
  CHECK(f->args[1]->args[1]->args[1]->op == ltl::Op::until);
  auto g = ltl::parse("G F !X a W b W c");
  CHECK(g->op == ltl::Op::weak_until);
  CHECK(g->args[1]->op == ltl::Op::weak_until);
  CHECK(ltl::equal(ltl::parse("(a -> b) -> c"), ltl::parse("(a -> b) -> (c)")));
  CHECK_FALSE(ltl::equal(ltl::parse("(a -> b) -> c"), ltl::parse("a -> b -> c")));
  CHECK_THROWS_AS(ltl::parse("a &"), Error);
  CHECK_THROWS_AS(ltl::parse("G (a"), Error);
}

TEST_CASE("exported formulas re-parse") {
  for (const SpecModel& s : {gen_multimode(1), gen_multimode(2), fixtures::modes(), gen_cleaning(1)}) {
    std::string text = ltl::export_text(s);
    auto f = ltl::parse(text);
    CHECK(ltl::equal(f, ltl::export_spec(s)));
    CHECK(ltl::to_string(f) == ltl::to_string(ltl::export_spec(s)));
  }
  SpecModel one = gen_multimode(1);
  CHECK(ltl::export_text(one).find("X t0") != std::string::npos);
  CHECK(ltl::export_text(one).find("<->") == std::string::npos);
}

TEST_CASE("basic lasso semantics") {
  std::vector<std::string> v{"a"};
  ltl::Lasso w{{{false}, {true}}, 1};
  CHECK(ltl::evaluate(ltl::parse("F G a"), v, w));
  CHECK(ltl::evaluate(ltl::parse("!a & X a"), v, w));
  CHECK_FALSE(ltl::evaluate(ltl::parse("a U false"), v, w));
  CHECK(ltl::evaluate(ltl::parse("false W !a"), v, w));
  CHECK(ltl::evaluate(ltl::parse("a W false"), v, ltl::Lasso{{{true}}, 0}));
  ltl::Lasso alt{{{false}, {true}}, 0};
  CHECK(ltl::evaluate(ltl::parse("G F a & G F !a"), v, alt));
  CHECK_FALSE(ltl::evaluate(ltl::parse("F G a"), v, alt));
}

TEST_CASE("exported formula agrees with the strict semantics on random lassos") {
  std::mt19937_64 rng(42);
  std::vector<SpecModel> specs{fixtures::modes(), gen_multimode(1)};
  SpecModel none = fixtures::modes();
  none.conjuncts.clear();
  specs.push_back(none);
  RandomGameParams params;
  params.max_vars = 4;
  for (std::uint64_t seed = 0; seed < 10; ++seed) specs.push_back(random_separated_grk(seed, params));
  for (const SpecModel& s : specs) {
    auto f = ltl::export_spec(s);
    auto vars = vars_of(s);
    std::size_t agree_true = 0;
    for (int k = 0; k < 300; ++k) {
      ltl::Lasso w = random_lasso(rng, vars.size());
      bool strict = ltl::strict_semantics(s, w);
      REQUIRE(ltl::evaluate(f, vars, w) == strict);
      agree_true += strict;
    }
    CHECK(agree_true > 0);
  }
}
