#include "sgrk/spec.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>

#include "sgrk/error.hpp"

namespace sgrk {

std::size_t SpecModel::phi_size() const {
  std::size_t n = 0;
  for (const auto& c : conjuncts) n += c.assumptions.size() + c.guarantees.size();
  return n;
}

std::size_t SpecModel::guarantee_count() const {
  std::size_t n = 0;
  for (const auto& c : conjuncts) n += c.guarantees.size();
  return n;
}

std::uint64_t SymbolicGame::state_space_size() const {
  std::size_t n = var_count();
  if (n >= 64) return std::numeric_limits<std::uint64_t>::max();
  return std::uint64_t{1} << n;
}

std::string to_bits(const std::vector<bool>& values) {
  std::string out;
  out.reserve(values.size());
  for (bool b : values) out += b ? '1' : '0';
  return out;
}

std::vector<bool> from_bits(std::string_view bits) {
  std::vector<bool> out;
  out.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw Error(ErrorKind::syntax, "bad bitstring '" + std::string(bits) + "'");
    }
    out.push_back(c == '1');
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

enum class Key { input_vars, output_vars, init_env, init_sys, trans_env, trans_sys, grk, assume, guarantee };

struct KeyName {
  Key key;
  std::string_view name;
};

constexpr KeyName kKeys[] = {
    {Key::input_vars, "INPUT_VARS"}, {Key::output_vars, "OUTPUT_VARS"}, {Key::init_env, "INIT_ENV"},
    {Key::init_sys, "INIT_SYS"},     {Key::trans_env, "TRANS_ENV"},     {Key::trans_sys, "TRANS_SYS"},
    {Key::grk, "GRK"},               {Key::assume, "ASSUME"},           {Key::guarantee, "GUARANTEE"},
};

struct Item {
  Key key;
  std::string text;
  int line;
  int column;  // column of the first character of `text`
};

[[noreturn]] void syntax_error(int line, int column, const std::string& what) {
  throw Error(ErrorKind::syntax, std::to_string(line) + ":" + std::to_string(column) + ": " + what);
}

std::vector<Item> split_items(std::string_view text) {
  std::vector<Item> items;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    pos = eol + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
      if (eol == text.size()) break;
      continue;
    }
    bool matched = false;
    for (const auto& k : kKeys) {
      std::string_view rest = line.substr(first);
      if (rest.size() > k.name.size() && rest.substr(0, k.name.size()) == k.name &&
          rest[k.name.size()] == ':') {
        std::size_t body = first + k.name.size() + 1;
        items.push_back({k.key, std::string(line.substr(body)), line_no, static_cast<int>(body) + 1});
        matched = true;
        break;
      }
    }
    if (!matched) {
      if (items.empty()) syntax_error(line_no, static_cast<int>(first) + 1, "expected a section keyword");
      // Continuation of the previous item.
      items.back().text += '\n';
      items.back().text += std::string(line);
    }
    if (eol == text.size()) break;
  }
  return items;
}

bool valid_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '.')) return false;
  }
  return s != "true" && s != "false";
}

std::vector<std::string> parse_var_list(const Item& item) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  const std::string& t = item.text;
  while (pos < t.size()) {
    if (std::isspace(static_cast<unsigned char>(t[pos]))) {
      ++pos;
      continue;
    }
    std::size_t end = pos;
    while (end < t.size() && !std::isspace(static_cast<unsigned char>(t[end]))) ++end;
    std::string name = t.substr(pos, end - pos);
    if (!valid_identifier(name)) {
      syntax_error(item.line, item.column + static_cast<int>(pos), "bad variable name '" + name + "'");
    }
    out.push_back(std::move(name));
    pos = end;
  }
  return out;
}

// Line/column of offset `off` inside an item's (possibly multi-line) text.
std::pair<int, int> locate(const Item& item, std::size_t off) {
  int line = item.line, column = item.column;
  for (std::size_t k = 0; k < off && k < item.text.size(); ++k) {
    if (item.text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

ExprPtr parse_item_formula(const Item& item) {
  std::size_t first = item.text.find_first_not_of(" \t\n");
  if (first == std::string::npos) syntax_error(item.line, item.column, "missing formula");
  auto [line, column] = locate(item, first);
  return parse_formula(std::string_view(item.text).substr(first), line, column);
}

std::vector<ExprPtr> parse_gf_list(const Item& item) {
  std::vector<ExprPtr> out;
  const std::string& t = item.text;
  std::size_t pos = 0;
  while (true) {
    while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
    if (pos >= t.size()) break;
    if (t.compare(pos, 3, "GF(") != 0) {
      auto [l, c] = locate(item, pos);
      syntax_error(l, c, "expected GF(...)");
    }
    std::size_t open = pos + 2;
    int depth = 0;
    std::size_t close = open;
    for (; close < t.size(); ++close) {
      if (t[close] == '(') ++depth;
      if (t[close] == ')' && --depth == 0) break;
    }
    if (close >= t.size()) {
      auto [l, c] = locate(item, pos);
      syntax_error(l, c, "unbalanced parentheses in GF(...)");
    }
    auto [l, c] = locate(item, open + 1);
    ExprPtr e = parse_formula(std::string_view(t).substr(open + 1, close - open - 1), l, c);
    if (mentions_primed(e)) syntax_error(l, c, "GF(...) takes a present-state assertion");
    out.push_back(e);
    pos = close + 1;
  }
  return out;
}

}  // namespace

SpecModel parse_spec_text(std::string_view text) {
  SpecModel spec;
  std::vector<Item> items = split_items(text);
  int stage = -1;  // index of the last top-level section seen
  bool have_assume = false, have_guarantee = false;
  bool have_inputs = false, have_outputs = false;
  for (const Item& item : items) {
    int rank = static_cast<int>(item.key);
    if (item.key == Key::assume || item.key == Key::guarantee) {
      if (stage != static_cast<int>(Key::grk)) {
        syntax_error(item.line, item.column, "ASSUME/GUARANTEE outside a GRK block");
      }
      bool& seen = item.key == Key::assume ? have_assume : have_guarantee;
      if (seen) syntax_error(item.line, item.column, "repeated line in GRK block");
      seen = true;
      auto list = parse_gf_list(item);
      auto& dst = item.key == Key::assume ? spec.conjuncts.back().assumptions
                                          : spec.conjuncts.back().guarantees;
      dst = std::move(list);
      continue;
    }
    if (item.key == Key::grk) {
      if (item.text.find_first_not_of(" \t\n") != std::string::npos) {
        syntax_error(item.line, item.column, "GRK: takes no argument");
      }
      stage = rank;
      have_assume = have_guarantee = false;
      spec.conjuncts.emplace_back();
      continue;
    }
    if (rank <= stage) syntax_error(item.line, item.column, "section out of order");
    stage = rank;
    switch (item.key) {
      case Key::input_vars:
        spec.inputs = parse_var_list(item);
        have_inputs = true;
        break;
      case Key::output_vars:
        spec.outputs = parse_var_list(item);
        have_outputs = true;
        break;
      case Key::init_env: spec.init_env = parse_item_formula(item); break;
      case Key::init_sys: spec.init_sys = parse_item_formula(item); break;
      case Key::trans_env: spec.trans_env = parse_item_formula(item); break;
      case Key::trans_sys: spec.trans_sys = parse_item_formula(item); break;
      default: break;
    }
  }
  if (!have_inputs) syntax_error(1, 1, "missing INPUT_VARS section");
  if (!have_outputs) syntax_error(1, 1, "missing OUTPUT_VARS section");
  return spec;
}

std::string print_spec(const SpecModel& spec) {
  std::string out;
  auto list = [&](const char* key, const std::vector<std::string>& names) {
    out += key;
    out += ':';
    for (const auto& n : names) out += ' ' + n;
    out += '\n';
  };
  auto formula = [&](const char* key, const ExprPtr& e) {
    out += key;
    out += ": " + to_string(e) + '\n';
  };
  auto gf = [&](const char* key, const std::vector<ExprPtr>& es) {
    out += "  ";
    out += key;
    out += ':';
    for (const auto& e : es) out += " GF(" + to_string(e) + ')';
    out += '\n';
  };
  list("INPUT_VARS", spec.inputs);
  list("OUTPUT_VARS", spec.outputs);
  formula("INIT_ENV", spec.init_env);
  formula("INIT_SYS", spec.init_sys);
  formula("TRANS_ENV", spec.trans_env);
  formula("TRANS_SYS", spec.trans_sys);
  for (const auto& c : spec.conjuncts) {
    out += "GRK:\n";
    gf("ASSUME", c.assumptions);
    gf("GUARANTEE", c.guarantees);
  }
  return out;
}

bool equal(const SpecModel& a, const SpecModel& b) {
  auto same_list = [](const std::vector<ExprPtr>& x, const std::vector<ExprPtr>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (!equal(x[k], y[k])) return false;
    }
    return true;
  };
  if (a.inputs != b.inputs || a.outputs != b.outputs) return false;
  if (!equal(a.init_env, b.init_env) || !equal(a.init_sys, b.init_sys)) return false;
  if (!equal(a.trans_env, b.trans_env) || !equal(a.trans_sys, b.trans_sys)) return false;
  if (a.conjuncts.size() != b.conjuncts.size()) return false;
  for (std::size_t l = 0; l < a.conjuncts.size(); ++l) {
    if (!same_list(a.conjuncts[l].assumptions, b.conjuncts[l].assumptions)) return false;
    if (!same_list(a.conjuncts[l].guarantees, b.conjuncts[l].guarantees)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Compilation

SymbolicGame build_game(const SpecModel& spec, const CompileOptions& options) {
  using dd::Copy;
  using dd::Role;
  dd::VarRegistry reg;
  std::set<std::string> outputs(spec.outputs.begin(), spec.outputs.end());
  for (const auto& n : spec.inputs) {
    if (outputs.count(n)) throw Error(ErrorKind::invalid_argument, "variable declared as input and output: " + n);
    reg.declare(n, Role::input);
  }
  for (const auto& n : spec.outputs) reg.declare(n, Role::output);

  auto no_primes = [](const ExprPtr& e, const char* where) {
    if (mentions_primed(e)) {
      throw Error(ErrorKind::invalid_argument, std::string(where) + " may not mention primed variables");
    }
  };
  no_primes(spec.init_env, "INIT_ENV");
  no_primes(spec.init_sys, "INIT_SYS");
  for (const auto& c : spec.conjuncts) {
    for (const auto& e : c.assumptions) no_primes(e, "ASSUME");
    for (const auto& e : c.guarantees) no_primes(e, "GUARANTEE");
  }
  for (const Atom& a : atoms(spec.trans_env)) {
    if (a.primed && outputs.count(a.name)) {
      throw Error(ErrorKind::separation,
                  "TRANS_ENV mentions the next value of output " + a.name + " (separation violation: " + a.name + ")");
    }
  }

  SymbolicGame g;
  dd::ManagerOptions mopts;
  mopts.auto_reorder = options.auto_reorder;
  g.mgr = std::make_unique<dd::Manager>(std::move(reg), mopts);
  g.spec = spec;
  const dd::VarRegistry& r = g.mgr->registry();
  g.in_cur = r.vars(Copy::current, Role::input);
  g.in_next = r.vars(Copy::next, Role::input);
  g.out_cur = r.vars(Copy::current, Role::output);
  g.out_next = r.vars(Copy::next, Role::output);
  g.cur = r.vars(Copy::current);
  g.next = r.vars(Copy::next);
  g.aux = r.vars(Copy::aux);
  dd::Manager& m = *g.mgr;
  g.theta_i = to_bdd(m, spec.init_env);
  g.theta_o = to_bdd(m, spec.init_sys);
  g.rho_i = to_bdd(m, spec.trans_env);
  g.rho_o = to_bdd(m, spec.trans_sys);
  for (const auto& c : spec.conjuncts) {
    auto& as = g.assumptions.emplace_back();
    auto& gs = g.guarantees.emplace_back();
    for (const auto& e : c.assumptions) as.push_back(to_bdd(m, e));
    for (const auto& e : c.guarantees) gs.push_back(to_bdd(m, e));
  }
  g.separated = validate(g).separated;
  return g;
}

namespace {

std::string describe_state(const SymbolicGame& g, const std::vector<bool>& values) {
  std::vector<bool> in(values.begin(), values.begin() + static_cast<long>(g.in_cur.size()));
  std::vector<bool> out(values.begin() + static_cast<long>(g.in_cur.size()), values.end());
  return "inputs=" + to_bits(in) + " outputs=" + to_bits(out);
}

}  // namespace

ValidationReport validate(const SymbolicGame& g) {
  ValidationReport rep;
  dd::Manager& m = *g.mgr;
  const dd::VarRegistry& r = m.registry();

  auto containment = [&](const dd::Bdd& f, const std::vector<dd::VarId>& a, const std::vector<dd::VarId>& b,
                         const std::string& what) {
    for (dd::VarId v : m.support(f)) {
      if (std::find(a.begin(), a.end(), v) == a.end() && std::find(b.begin(), b.end(), v) == b.end()) {
        rep.separated = false;
        rep.separation_issues.push_back(what + " depends on " + r.var_name(v));
      }
    }
  };
  const std::vector<dd::VarId> none;
  containment(g.theta_i, g.in_cur, none, "INIT_ENV");
  containment(g.theta_o, g.out_cur, none, "INIT_SYS");
  containment(g.rho_i, g.in_cur, g.in_next, "TRANS_ENV");
  containment(g.rho_o, g.out_cur, g.out_next, "TRANS_SYS");
  for (std::size_t l = 0; l < g.assumptions.size(); ++l) {
    for (std::size_t i = 0; i < g.assumptions[l].size(); ++i) {
      containment(g.assumptions[l][i], g.in_cur, none,
                  "assumption " + std::to_string(i) + " of conjunct " + std::to_string(l));
    }
    for (std::size_t j = 0; j < g.guarantees[l].size(); ++j) {
      containment(g.guarantees[l][j], g.out_cur, none,
                  "guarantee " + std::to_string(j) + " of conjunct " + std::to_string(l));
    }
  }

  dd::Bdd env_ok = m.exists(g.in_next, g.rho_i);
  if (!env_ok.is_true()) {
    rep.deadlock_free = false;
    auto w = m.pick_one(!env_ok, g.cur);
    rep.deadlock_witnesses.push_back("environment deadlocks at " + describe_state(g, *w));
  }
  dd::Bdd sys_ok = m.forall(g.in_next, g.rho_i.implies(m.exists(g.out_next, g.rho_o)));
  if (!sys_ok.is_true()) {
    rep.deadlock_free = false;
    auto w = m.pick_one(!sys_ok, g.cur);
    rep.deadlock_witnesses.push_back("system deadlocks at " + describe_state(g, *w));
  }
  if (g.theta_i.is_false()) {
    rep.init_satisfiable = false;
    rep.init_issues.push_back("INIT_ENV is unsatisfiable");
  }
  if (g.theta_o.is_false()) {
    rep.init_satisfiable = false;
    rep.init_issues.push_back("INIT_SYS is unsatisfiable");
  }
  return rep;
}

SymbolicGame compile(const SpecModel& spec, const CompileOptions& options) {
  SymbolicGame g = build_game(spec, options);
  ValidationReport rep = validate(g);
  if (!rep.separated && !options.allow_non_separated) {
    throw Error(ErrorKind::separation, "separation violation: " + rep.separation_issues.front());
  }
  if (!rep.deadlock_free) throw Error(ErrorKind::deadlock, rep.deadlock_witnesses.front());
  if (!rep.init_satisfiable) throw Error(ErrorKind::unsatisfiable_init, rep.init_issues.front());
  return g;
}

SymbolicGame parse_game(std::string_view text, const CompileOptions& options) {
  return compile(parse_spec_text(text), options);
}

}  // namespace sgrk
