#include "sgrk/ltl.hpp"

#include <cctype>
#include <functional>
#include <map>

#include "sgrk/error.hpp"

namespace sgrk::ltl {

namespace {

FormulaPtr make(Op op, std::vector<FormulaPtr> args = {}) {
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->args = std::move(args);
  return f;
}

FormulaPtr constant(bool v) {
  auto f = std::make_shared<Formula>();
  f->value = v;
  return f;
}

FormulaPtr atom(std::string name) {
  auto f = std::make_shared<Formula>();
  f->op = Op::atom;
  f->name = std::move(name);
  return f;
}

class Parser {
 public:
  explicit Parser(std::string_view t) : text_(t) {}

  FormulaPtr run() {
    FormulaPtr f = implies();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::syntax, "ltl:" + std::to_string(pos_ + 1) + ": " + msg);
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(std::string_view tok) {
    skip();
    if (text_.substr(pos_, tok.size()) != tok) return false;
    // Single-letter temporal operators must not be the prefix of an identifier.
    if (std::isalpha(static_cast<unsigned char>(tok[0])) && pos_ + tok.size() < text_.size() &&
        ident_char(text_[pos_ + tok.size()])) {
      return false;
    }
    pos_ += tok.size();
    return true;
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '.';
  }

  FormulaPtr implies() {
    FormulaPtr lhs = disj();
    if (eat("->")) return make(Op::implies, {lhs, implies()});
    return lhs;
  }
  FormulaPtr disj() {
    std::vector<FormulaPtr> args{conj()};
    while (eat("|")) args.push_back(conj());
    return args.size() == 1 ? args[0] : make(Op::disj, std::move(args));
  }
  FormulaPtr conj() {
    std::vector<FormulaPtr> args{binary()};
    while (eat("&")) args.push_back(binary());
    return args.size() == 1 ? args[0] : make(Op::conj, std::move(args));
  }
  FormulaPtr binary() {
    FormulaPtr lhs = unary();
    if (eat("U")) return make(Op::until, {lhs, binary()});
    if (eat("W")) return make(Op::weak_until, {lhs, binary()});
    return lhs;
  }
  FormulaPtr unary() {
    if (eat("!")) return make(Op::negation, {unary()});
    if (eat("X")) return make(Op::next, {unary()});
    if (eat("G")) return make(Op::globally, {unary()});
    if (eat("F")) return make(Op::finally, {unary()});
    if (eat("(")) {
      FormulaPtr f = implies();
      if (!eat(")")) fail("expected ')'");
      return f;
    }
    skip();
    std::size_t start = pos_;
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    }
    if (start == pos_) fail(pos_ < text_.size() ? "unexpected '" + std::string(1, text_[pos_]) + "'" : "unexpected end");
    std::string name(text_.substr(start, pos_ - start));
    if (name == "true") return constant(true);
    if (name == "false") return constant(false);
    return atom(std::move(name));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

int precedence(Op op) {
  switch (op) {
    case Op::implies: return 1;
    case Op::disj: return 2;
    case Op::conj: return 3;
    case Op::until:
    case Op::weak_until: return 4;
    default: return 5;
  }
}

void print(const FormulaPtr& f, std::string& out, int context) {
  int p = precedence(f->op);
  bool paren = p < context;
  if (paren) out += '(';
  switch (f->op) {
    case Op::constant: out += f->value ? "true" : "false"; break;
    case Op::atom: out += f->name; break;
    case Op::negation:
    case Op::next:
    case Op::globally:
    case Op::finally: {
      static const std::map<Op, const char*> prefix{
          {Op::negation, "!"}, {Op::next, "X "}, {Op::globally, "G "}, {Op::finally, "F "}};
      out += prefix.at(f->op);
      print(f->args[0], out, 5);
      break;
    }
    case Op::conj:
    case Op::disj:
      for (std::size_t k = 0; k < f->args.size(); ++k) {
        if (k) out += f->op == Op::conj ? " & " : " | ";
        print(f->args[k], out, p + 1);
      }
      break;
    case Op::implies:
    case Op::until:
    case Op::weak_until:
      print(f->args[0], out, p + 1);
      out += f->op == Op::implies ? " -> " : f->op == Op::until ? " U " : " W ";
      print(f->args[1], out, p);
      break;
  }
  if (paren) out += ')';
}

FormulaPtr conj_of(std::vector<FormulaPtr> args) {
  if (args.empty()) return constant(true);
  if (args.size() == 1) return args[0];
  return make(Op::conj, std::move(args));
}

}  // namespace

FormulaPtr parse(std::string_view text) { return Parser(text).run(); }

std::string to_string(const FormulaPtr& f) {
  std::string out;
  print(f, out, 0);
  return out;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a->op != b->op || a->value != b->value || a->name != b->name || a->args.size() != b->args.size()) return false;
  for (std::size_t k = 0; k < a->args.size(); ++k) {
    if (!equal(a->args[k], b->args[k])) return false;
  }
  return true;
}

FormulaPtr from_expr(const ExprPtr& e) {
  std::vector<FormulaPtr> args;
  for (const auto& a : e->args) args.push_back(from_expr(a));
  switch (e->kind) {
    case ExprKind::constant: return constant(e->value);
    case ExprKind::var: return e->primed ? make(Op::next, {atom(e->name)}) : atom(e->name);
    case ExprKind::negation: return make(Op::negation, std::move(args));
    case ExprKind::conj: return make(Op::conj, std::move(args));
    case ExprKind::disj: return make(Op::disj, std::move(args));
    case ExprKind::implies: return make(Op::implies, std::move(args));
    case ExprKind::iff:
      // a <-> b  as  (a -> b) & (b -> a); the export grammar has no iff.
      return make(Op::conj, {make(Op::implies, {args[0], args[1]}), make(Op::implies, {args[1], args[0]})});
  }
  throw Error(ErrorKind::internal, "unknown expression kind");
}

FormulaPtr export_spec(const SpecModel& spec) {
  FormulaPtr rho_i = from_expr(spec.trans_env), rho_o = from_expr(spec.trans_sys);
  std::vector<FormulaPtr> conjuncts;
  for (const auto& c : spec.conjuncts) {
    std::vector<FormulaPtr> as, gs;
    for (const auto& a : c.assumptions) as.push_back(make(Op::globally, {make(Op::finally, {from_expr(a)})}));
    for (const auto& g : c.guarantees) gs.push_back(make(Op::globally, {make(Op::finally, {from_expr(g)})}));
    conjuncts.push_back(make(Op::implies, {conj_of(std::move(as)), conj_of(std::move(gs))}));
  }
  FormulaPtr phi = conj_of(std::move(conjuncts));
  FormulaPtr body = make(Op::conj, {from_expr(spec.init_sys),
                                    make(Op::weak_until, {rho_o, make(Op::negation, {rho_i})}),
                                    make(Op::implies, {make(Op::globally, {rho_i}), phi})});
  return make(Op::implies, {from_expr(spec.init_env), body});
}

std::string export_text(const SpecModel& spec) { return to_string(export_spec(spec)) + "\n"; }

bool evaluate(const FormulaPtr& f, const std::vector<std::string>& vars, const Lasso& w) {
  const std::size_t n = w.positions.size();
  if (n == 0 || w.loop_start >= n) throw Error(ErrorKind::invalid_argument, "malformed lasso");
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < vars.size(); ++k) index[vars[k]] = k;
  auto succ = [&](std::size_t i) { return i + 1 < n ? i + 1 : w.loop_start; };

  // Truth value at every position; fixpoints iterate until stable, which
  // takes at most 2n sweeps on a lasso.
  std::function<std::vector<bool>(const FormulaPtr&)> sat = [&](const FormulaPtr& g) -> std::vector<bool> {
    std::vector<bool> v(n);
    switch (g->op) {
      case Op::constant: v.assign(n, g->value); break;
      case Op::atom: {
        auto it = index.find(g->name);
        if (it == index.end()) throw Error(ErrorKind::unknown_variable, "unknown variable '" + g->name + "'");
        for (std::size_t i = 0; i < n; ++i) v[i] = w.positions[i].at(it->second);
        break;
      }
      case Op::negation: {
        auto a = sat(g->args[0]);
        for (std::size_t i = 0; i < n; ++i) v[i] = !a[i];
        break;
      }
      case Op::conj:
      case Op::disj: {
        v.assign(n, g->op == Op::conj);
        for (const auto& arg : g->args) {
          auto a = sat(arg);
          for (std::size_t i = 0; i < n; ++i) v[i] = g->op == Op::conj ? v[i] && a[i] : v[i] || a[i];
        }
        break;
      }
      case Op::implies: {
        auto a = sat(g->args[0]), b = sat(g->args[1]);
        for (std::size_t i = 0; i < n; ++i) v[i] = !a[i] || b[i];
        break;
      }
      case Op::next: {
        auto a = sat(g->args[0]);
        for (std::size_t i = 0; i < n; ++i) v[i] = a[succ(i)];
        break;
      }
      case Op::globally:
      case Op::finally:
      case Op::until:
      case Op::weak_until: {
        std::vector<bool> hold, goal;
        bool greatest = g->op == Op::globally || g->op == Op::weak_until;
        if (g->op == Op::globally) {
          hold = sat(g->args[0]);
          goal.assign(n, false);
        } else if (g->op == Op::finally) {
          hold.assign(n, true);
          goal = sat(g->args[0]);
        } else {
          hold = sat(g->args[0]);
          goal = sat(g->args[1]);
        }
        v.assign(n, greatest);
        for (bool changed = true; changed;) {
          changed = false;
          for (std::size_t i = n; i-- > 0;) {
            bool nv = goal[i] || (hold[i] && v[succ(i)]);
            if (nv != v[i]) {
              v[i] = nv;
              changed = true;
            }
          }
        }
        break;
      }
    }
    return v;
  };
  return sat(f)[0];
}

bool strict_semantics(const SpecModel& spec, const Lasso& w) {
  std::vector<std::string> vars = spec.inputs;
  vars.insert(vars.end(), spec.outputs.begin(), spec.outputs.end());
  const std::size_t nv = vars.size(), n = w.positions.size();
  auto slot = [&](const Atom& a) -> std::size_t {
    for (std::size_t k = 0; k < nv; ++k) {
      if (vars[k] == a.name) return k + (a.primed ? nv : 0);
    }
    throw Error(ErrorKind::unknown_variable, "unknown variable '" + a.name + "'");
  };
  auto at = [&](const ExprPtr& e, std::size_t i) {
    std::vector<bool> s = w.positions[i];
    const auto& nx = w.positions[i + 1 < n ? i + 1 : w.loop_start];
    s.insert(s.end(), nx.begin(), nx.end());
    return CompiledExpr(e, slot).eval(s);
  };
  if (!at(spec.init_env, 0)) return true;
  if (!at(spec.init_sys, 0)) return false;
  // Every transition of the play occurs within the first n steps.
  for (std::size_t i = 0; i < n; ++i) {
    if (!at(spec.trans_env, i)) return true;
    if (!at(spec.trans_sys, i)) return false;
  }
  for (const auto& c : spec.conjuncts) {
    auto recurring = [&](const ExprPtr& e) {
      for (std::size_t i = w.loop_start; i < n; ++i) {
        if (at(e, i)) return true;
      }
      return false;
    };
    bool assumed = true;
    for (const auto& a : c.assumptions) assumed = assumed && recurring(a);
    if (!assumed) continue;
    for (const auto& g : c.guarantees) {
      if (!recurring(g)) return false;
    }
  }
  return true;
}

}  // namespace sgrk::ltl
