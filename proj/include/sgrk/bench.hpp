#pragma once

#include <string>

#include "sgrk/spec.hpp"

namespace sgrk {

// Two variables per mode bit: t (target mode) and a (adaptee mode).
SpecModel gen_multimode(std::size_t n);
// 4n+1 variables: two one-hot robots with per-room cleaned flags plus `done`.
SpecModel gen_cleaning(std::size_t n);
// (2 + 2*ceil(log2 m)) * n variables: a signal and a saturating counter per rail and side.
SpecModel gen_railways(std::size_t n, std::size_t m);

std::size_t ceil_log2(std::size_t m);

// family in {multimode, cleaning, railways}; m is used by railways only.
SpecModel gen_family(const std::string& family, std::size_t n, std::size_t m = 2);
std::size_t expected_var_count(const std::string& family, std::size_t n, std::size_t m = 2);

}  // namespace sgrk
