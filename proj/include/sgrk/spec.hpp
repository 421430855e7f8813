#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sgrk/dd.hpp"
#include "sgrk/formula.hpp"

namespace sgrk {

struct GrkConjunct {
  std::vector<ExprPtr> assumptions;  // over inputs
  std::vector<ExprPtr> guarantees;   // over outputs
};

// The textual model of a `.sgrk` file.
struct SpecModel {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  ExprPtr init_env = mk_const(true);
  ExprPtr init_sys = mk_const(true);
  ExprPtr trans_env = mk_const(true);
  ExprPtr trans_sys = mk_const(true);
  std::vector<GrkConjunct> conjuncts;

  std::size_t var_count() const { return inputs.size() + outputs.size(); }
  // |phi| = sum over conjuncts of (n_l + m_l).
  std::size_t phi_size() const;
  std::size_t guarantee_count() const;
};

SpecModel parse_spec_text(std::string_view text);
std::string print_spec(const SpecModel& spec);
bool equal(const SpecModel& a, const SpecModel& b);

struct ValidationReport {
  bool separated = true;
  std::vector<std::string> separation_issues;
  bool deadlock_free = true;
  std::vector<std::string> deadlock_witnesses;
  bool init_satisfiable = true;
  std::vector<std::string> init_issues;

  bool ok() const { return separated && deadlock_free && init_satisfiable; }
};

// A specification compiled to decision diagrams. Inputs are declared before
// outputs, so the default order is i0 i0' i0'' i1 ... o0 o0' o0'' ...
struct SymbolicGame {
  std::unique_ptr<dd::Manager> mgr;
  SpecModel spec;
  std::vector<dd::VarId> in_cur, in_next, out_cur, out_next;
  std::vector<dd::VarId> cur, next, aux;
  dd::Bdd theta_i, theta_o, rho_i, rho_o;
  std::vector<std::vector<dd::Bdd>> assumptions, guarantees;
  bool separated = true;

  std::size_t var_count() const { return spec.var_count(); }
  // N = 2^(|I|+|O|); saturates at UINT64_MAX beyond 63 variables.
  std::uint64_t state_space_size() const;
  dd::Bdd trans() const { return rho_i & rho_o; }
};

struct CompileOptions {
  bool allow_non_separated = false;
  bool auto_reorder = false;
};

// Builds the diagrams without semantic checks (syntactic ones still apply:
// unknown or duplicate variables, primes where none are allowed, primed
// outputs in TRANS_ENV).
SymbolicGame build_game(const SpecModel& spec, const CompileOptions& options = {});
ValidationReport validate(const SymbolicGame& game);
// build_game + validate, throwing the first failure as an Error.
SymbolicGame compile(const SpecModel& spec, const CompileOptions& options = {});
SymbolicGame parse_game(std::string_view text, const CompileOptions& options = {});

std::string to_bits(const std::vector<bool>& values);
std::vector<bool> from_bits(std::string_view bits);

}  // namespace sgrk
