#include <functional>

#include "doctest.h"
#include "fixtures.hpp"
#include "sgrk/bench.hpp"
#include "sgrk/error.hpp"
#include "sgrk/oracle.hpp"
#include "sgrk/random_games.hpp"

using namespace sgrk;
using fixtures::idx;

TEST_CASE("state budget") {
  SpecModel spec = gen_multimode(8);
  try {
    enumerate_game(spec);
    FAIL("expected budget_exceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::budget_exceeded);
  }
  CHECK(enumerate_game(spec, std::size_t{1} << 16).num_states == 65536);
}

TEST_CASE("explicit three-mode game") {
  SpecModel spec = fixtures::modes();
  ExplicitGame eg = enumerate_game(spec);
  CHECK(eg.separated);
  CHECK(eg.num_states == 16);
  CHECK(eg.scc_count() == 13);
  CHECK(eg.state_values(idx("01", "10")) == std::vector<bool>{false, true, true, false});
  CHECK(eg.index_of({true, false, false, true}) == idx("10", "01"));
  CHECK(check_scc_product_structure(eg));

  std::vector<bool> win = solve_backward(eg, grk_acc_labels(eg, spec));
  CHECK(explicit_realizable(eg, win));
  CHECK_FALSE(win[idx("00", "10")]);
  CHECK(win[idx("10", "10")]);
  CHECK_FALSE(check_delay_property(eg, win).has_value());
  std::vector<bool> env = solve_env_backward(eg, grk_acc_labels(eg, spec));
  CHECK(check_env_spoiling(eg, win, env).ok);

  // Dropping a state that the environment can move into from a winning state.
  std::vector<bool> mutated = win;
  mutated[idx("01", "00")] = false;
  auto v = check_delay_property(eg, mutated);
  REQUIRE(v.has_value());
  CHECK(v->losing == idx("01", "00"));
  CHECK_FALSE(check_env_spoiling(eg, mutated, env).ok);
}

TEST_CASE("Tarjan completion order") {
  std::vector<std::vector<std::uint32_t>> succ{{1}, {2}, {1, 3}, {}};
  std::size_t count = 0;
  auto id = tarjan_scc(4, succ, &count);
  CHECK(count == 3);
  CHECK(id[1] == id[2]);
  CHECK(id[3] < id[1]);
  CHECK(id[1] < id[0]);
}

TEST_CASE("saturation of acceptance sets") {
  ExplicitGame eg = enumerate_game(fixtures::modes());
  std::vector<bool> set(16, false);
  set[idx("01", "00")] = true;
  auto v = saturation_violation(eg, set);
  REQUIRE(v.has_value());
  CHECK_THROWS_AS(acc_labels_from_states(eg, set), Error);
  set[idx("01", "01")] = true;
  CHECK_FALSE(saturation_violation(eg, set).has_value());
}

TEST_CASE("general games are refused where separation is required") {
  RandomGameParams params;
  params.max_vars = 5;
  for (std::uint64_t seed = 1; seed < 40; ++seed) {
    RandomWeakBuchi rw = random_weak_buchi(seed, false, params);
    ExplicitGame eg = enumerate_game(rw.spec);
    if (eg.separated) continue;
    std::vector<bool> win(eg.num_states, true);
    CHECK_THROWS_AS(check_delay_property(eg, win), Error);
    CHECK_FALSE(check_scc_product_structure(eg));
    return;
  }
  FAIL("no non-separated instance generated");
}
