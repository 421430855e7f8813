#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "sgrk/spec.hpp"

namespace fixtures {

inline std::string read(const std::string& name) {
  std::ifstream in(std::string(SGRK_DATA_DIR) + "/" + name, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Three-mode hardware: Input and Output systems over t1 t0 / a1 a0.
inline sgrk::SpecModel modes() { return sgrk::parse_spec_text(read("modes.sgrk")); }

// Explicit state index for (t, a) bitstrings, first variable most significant.
inline std::uint32_t idx(const std::string& t, const std::string& a) {
  return static_cast<std::uint32_t>(std::stoul(t + a, nullptr, 2));
}

}  // namespace fixtures
