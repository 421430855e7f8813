#include "doctest.h"
#include "sgrk/bench.hpp"
#include "sgrk/error.hpp"
#include "sgrk/grk.hpp"

using namespace sgrk;

TEST_CASE("variable counts") {
  for (std::size_t n = 1; n <= 6; ++n) {
    CHECK(gen_multimode(n).var_count() == 2 * n);
    CHECK(gen_cleaning(n).var_count() == 4 * n + 1);
    CHECK(expected_var_count("cleaning", n) == 4 * n + 1);
  }
  for (std::size_t n = 2; n <= 5; ++n) {
    for (std::size_t m = 2; m <= 9; ++m) {
      CHECK(gen_railways(n, m).var_count() == (2 + 2 * ceil_log2(m)) * n);
      CHECK(expected_var_count("railways", n, m) == gen_family("railways", n, m).var_count());
    }
  }
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(3) == 2);
  CHECK(ceil_log2(8) == 3);
  CHECK(ceil_log2(9) == 4);
}

TEST_CASE("invalid parameters") {
  CHECK_THROWS_AS(gen_railways(1, 3), Error);
  CHECK_THROWS_AS(gen_railways(3, 1), Error);
  CHECK_THROWS_AS(gen_multimode(0), Error);
  CHECK_THROWS_AS(gen_family("elevators", 2), Error);
}

TEST_CASE("small instances are realizable") {
  for (const SpecModel& spec : {gen_multimode(3), gen_cleaning(2), gen_railways(2, 2), gen_railways(3, 3)}) {
    SymbolicGame g = compile(spec);
    CHECK(g.separated);
    CHECK(solve(g).realizable);
  }
}
