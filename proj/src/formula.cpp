#include "sgrk/formula.hpp"

#include <algorithm>
#include <cctype>

#include "sgrk/error.hpp"

namespace sgrk {

ExprPtr mk_const(bool value) {
  static const ExprPtr t = [] {
    auto e = std::make_shared<Expr>();
    e->value = true;
    return e;
  }();
  static const ExprPtr f = std::make_shared<Expr>();
  return value ? t : f;
}

ExprPtr mk_var(std::string name, bool primed) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::var;
  e->name = std::move(name);
  e->primed = primed;
  return e;
}

ExprPtr mk_lit(std::string name, bool positive, bool primed) {
  ExprPtr v = mk_var(std::move(name), primed);
  return positive ? v : mk_not(v);
}

ExprPtr mk_not(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::negation;
  e->args.push_back(std::move(a));
  return e;
}

namespace {

ExprPtr mk_nary(ExprKind kind, std::vector<ExprPtr> args) {
  if (args.empty()) return mk_const(kind == ExprKind::conj);
  if (args.size() == 1) return args.front();
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->args = std::move(args);
  return e;
}

ExprPtr mk_binary(ExprKind kind, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->args = {std::move(a), std::move(b)};
  return e;
}

}  // namespace

ExprPtr mk_and(std::vector<ExprPtr> args) { return mk_nary(ExprKind::conj, std::move(args)); }
ExprPtr mk_or(std::vector<ExprPtr> args) { return mk_nary(ExprKind::disj, std::move(args)); }
ExprPtr mk_implies(ExprPtr a, ExprPtr b) { return mk_binary(ExprKind::implies, std::move(a), std::move(b)); }
ExprPtr mk_iff(ExprPtr a, ExprPtr b) { return mk_binary(ExprKind::iff, std::move(a), std::move(b)); }

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { ident, lparen, rparen, bang, amp, bar, arrow, darrow, kw_true, kw_false, end };

struct Token {
  Tok kind;
  std::string text;
  bool primed = false;
  int line;
  int column;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '.';
}

class Parser {
 public:
  Parser(std::string_view text, int line, int column) : text_(text), line_(line), column_(column) {
    advance();
  }

  ExprPtr parse() {
    ExprPtr e = parse_iff();
    if (tok_.kind != Tok::end) fail("unexpected '" + tok_.text + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::syntax,
                std::to_string(tok_.line) + ":" + std::to_string(tok_.column) + ": " + what);
  }

  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
      ++pos_;
    }
    tok_ = Token{Tok::end, "", false, line_, column_};
    if (pos_ >= text_.size()) {
      tok_.text = "end of formula";
      return;
    }
    char c = text_[pos_];
    auto take = [&](Tok kind, std::size_t len) {
      tok_.kind = kind;
      tok_.text = std::string(text_.substr(pos_, len));
      pos_ += len;
      column_ += static_cast<int>(len);
    };
    if (c == '(') return take(Tok::lparen, 1);
    if (c == ')') return take(Tok::rparen, 1);
    if (c == '!') return take(Tok::bang, 1);
    if (c == '&') return take(Tok::amp, 1);
    if (c == '|') return take(Tok::bar, 1);
    if (text_.substr(pos_, 2) == "->") return take(Tok::arrow, 2);
    if (text_.substr(pos_, 3) == "<->") return take(Tok::darrow, 3);
    if (ident_start(c)) {
      std::size_t end = pos_;
      while (end < text_.size() && ident_char(text_[end])) ++end;
      take(Tok::ident, end - pos_);
      if (tok_.text == "true") tok_.kind = Tok::kw_true;
      if (tok_.text == "false") tok_.kind = Tok::kw_false;
      if (pos_ < text_.size() && text_[pos_] == '\'') {
        if (tok_.kind != Tok::ident) fail("constants cannot be primed");
        tok_.primed = true;
        ++pos_;
        ++column_;
        if (pos_ < text_.size() && text_[pos_] == '\'') fail("double priming is not supported");
      }
      return;
    }
    tok_.text = std::string(1, c);
    fail("unexpected character '" + tok_.text + "'");
  }

  ExprPtr parse_iff() {
    ExprPtr e = parse_implies();
    while (tok_.kind == Tok::darrow) {
      advance();
      e = mk_iff(e, parse_implies());
    }
    return e;
  }

  ExprPtr parse_implies() {
    ExprPtr e = parse_or();
    if (tok_.kind == Tok::arrow) {
      advance();
      return mk_implies(e, parse_implies());
    }
    return e;
  }

  ExprPtr parse_or() {
    std::vector<ExprPtr> args{parse_and()};
    while (tok_.kind == Tok::bar) {
      advance();
      args.push_back(parse_and());
    }
    return args.size() == 1 ? args.front() : mk_or(std::move(args));
  }

  ExprPtr parse_and() {
    std::vector<ExprPtr> args{parse_unary()};
    while (tok_.kind == Tok::amp) {
      advance();
      args.push_back(parse_unary());
    }
    return args.size() == 1 ? args.front() : mk_and(std::move(args));
  }

  ExprPtr parse_unary() {
    switch (tok_.kind) {
      case Tok::bang:
        advance();
        return mk_not(parse_unary());
      case Tok::lparen: {
        advance();
        ExprPtr e = parse_iff();
        if (tok_.kind != Tok::rparen) fail("expected ')'");
        advance();
        return e;
      }
      case Tok::kw_true:
        advance();
        return mk_const(true);
      case Tok::kw_false:
        advance();
        return mk_const(false);
      case Tok::ident: {
        ExprPtr e = mk_var(tok_.text, tok_.primed);
        advance();
        return e;
      }
      default:
        fail(tok_.kind == Tok::end ? "unexpected end of formula" : "unexpected '" + tok_.text + "'");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
  int column_;
  Token tok_{Tok::end, "", false, 0, 0};
};

int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::iff: return 1;
    case ExprKind::implies: return 2;
    case ExprKind::disj: return 3;
    case ExprKind::conj: return 4;
    case ExprKind::negation: return 5;
    default: return 6;
  }
}

void print(const ExprPtr& e, int min_prec, std::string& out) {
  int p = precedence(e->kind);
  bool paren = p < min_prec;
  if (paren) out += '(';
  switch (e->kind) {
    case ExprKind::constant:
      out += e->value ? "true" : "false";
      break;
    case ExprKind::var:
      out += e->name;
      if (e->primed) out += '\'';
      break;
    case ExprKind::negation:
      out += '!';
      print(e->args[0], 5, out);
      break;
    case ExprKind::conj:
    case ExprKind::disj: {
      const char* sep = e->kind == ExprKind::conj ? " & " : " | ";
      for (std::size_t k = 0; k < e->args.size(); ++k) {
        if (k > 0) out += sep;
        print(e->args[k], p + 1, out);
      }
      break;
    }
    case ExprKind::implies:
      print(e->args[0], 3, out);
      out += " -> ";
      print(e->args[1], 2, out);
      break;
    case ExprKind::iff:
      print(e->args[0], 1, out);
      out += " <-> ";
      print(e->args[1], 2, out);
      break;
  }
  if (paren) out += ')';
}

void collect_atoms(const ExprPtr& e, std::vector<Atom>& out) {
  if (e->kind == ExprKind::var) {
    out.push_back({e->name, e->primed});
    return;
  }
  for (const auto& a : e->args) collect_atoms(a, out);
}

}  // namespace

ExprPtr parse_formula(std::string_view text, int line, int column) {
  return Parser(text, line, column).parse();
}

std::string to_string(const ExprPtr& e) {
  std::string out;
  print(e, 0, out);
  return out;
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->args.size() != b->args.size()) return false;
  if (a->kind == ExprKind::constant) return a->value == b->value;
  if (a->kind == ExprKind::var) return a->name == b->name && a->primed == b->primed;
  for (std::size_t k = 0; k < a->args.size(); ++k) {
    if (!equal(a->args[k], b->args[k])) return false;
  }
  return true;
}

std::vector<Atom> atoms(const ExprPtr& e) {
  std::vector<Atom> out;
  collect_atoms(e, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool mentions_primed(const ExprPtr& e) {
  for (const Atom& a : atoms(e)) {
    if (a.primed) return true;
  }
  return false;
}

ExprPtr prime(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::constant: return e;
    case ExprKind::var:
      if (e->primed) throw Error(ErrorKind::invalid_argument, "cannot prime " + e->name + "'");
      return mk_var(e->name, true);
    default: {
      auto out = std::make_shared<Expr>(*e);
      for (auto& a : out->args) a = prime(a);
      return out;
    }
  }
}

dd::Bdd to_bdd(dd::Manager& mgr, const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::constant: return mgr.constant(e->value);
    case ExprKind::var:
      return mgr.var(dd::VarRegistry::var(
          [&] {
            auto base = mgr.registry().find(e->name);
            if (!base) throw Error(ErrorKind::unknown_variable, "unknown variable: " + e->name);
            return *base;
          }(),
          e->primed ? dd::Copy::next : dd::Copy::current));
    case ExprKind::negation: return !to_bdd(mgr, e->args[0]);
    case ExprKind::conj: {
      dd::Bdd r = mgr.one();
      for (const auto& a : e->args) r &= to_bdd(mgr, a);
      return r;
    }
    case ExprKind::disj: {
      dd::Bdd r = mgr.zero();
      for (const auto& a : e->args) r |= to_bdd(mgr, a);
      return r;
    }
    case ExprKind::implies: return to_bdd(mgr, e->args[0]).implies(to_bdd(mgr, e->args[1]));
    case ExprKind::iff: return to_bdd(mgr, e->args[0]).iff(to_bdd(mgr, e->args[1]));
  }
  throw Error(ErrorKind::internal, "bad formula node");
}

// ---------------------------------------------------------------------------
// Bytecode

namespace {

enum : std::uint32_t { kPush, kConst, kNot, kAnd, kOr, kImplies, kIff };

void emit(const ExprPtr& e, const std::function<std::size_t(const Atom&)>& slot,
          std::vector<std::uint32_t>& code) {
  switch (e->kind) {
    case ExprKind::constant: code.push_back(kConst | (e->value ? 1u << 8 : 0u)); return;
    case ExprKind::var: {
      std::size_t s = slot({e->name, e->primed});
      if (s >= 64) throw Error(ErrorKind::invalid_argument, "evaluation slot out of range");
      code.push_back(kPush | static_cast<std::uint32_t>(s << 8));
      return;
    }
    case ExprKind::negation:
      emit(e->args[0], slot, code);
      code.push_back(kNot);
      return;
    case ExprKind::conj:
    case ExprKind::disj:
      for (const auto& a : e->args) emit(a, slot, code);
      code.push_back((e->kind == ExprKind::conj ? kAnd : kOr) |
                     static_cast<std::uint32_t>(e->args.size() << 8));
      return;
    case ExprKind::implies:
    case ExprKind::iff:
      emit(e->args[0], slot, code);
      emit(e->args[1], slot, code);
      code.push_back(e->kind == ExprKind::implies ? kImplies : kIff);
      return;
  }
}

}  // namespace

CompiledExpr::CompiledExpr(const ExprPtr& e, const std::function<std::size_t(const Atom&)>& slot) {
  emit(e, slot, code_);
}

bool CompiledExpr::eval(const std::vector<bool>& slots) const {
  std::uint64_t bits = 0;
  for (std::size_t k = 0; k < slots.size() && k < 64; ++k) {
    if (slots[k]) bits |= std::uint64_t{1} << k;
  }
  return eval_bits(bits);
}

bool CompiledExpr::eval_bits(std::uint64_t bits) const {
  if (code_.empty()) return false;
  std::vector<std::uint8_t> stack;
  stack.reserve(32);
  for (std::uint32_t ins : code_) {
    std::uint32_t op = ins & 0xff, arg = ins >> 8;
    switch (op) {
      case kPush: stack.push_back((bits >> arg) & 1); break;
      case kConst: stack.push_back(static_cast<std::uint8_t>(arg)); break;
      case kNot: stack.back() = !stack.back(); break;
      case kAnd:
      case kOr: {
        bool acc = op == kAnd;
        for (std::uint32_t k = 0; k < arg; ++k) {
          bool v = stack.back();
          stack.pop_back();
          acc = op == kAnd ? (acc && v) : (acc || v);
        }
        stack.push_back(acc);
        break;
      }
      case kImplies:
      case kIff: {
        bool b = stack.back();
        stack.pop_back();
        bool a = stack.back();
        stack.back() = op == kImplies ? (!a || b) : (a == b);
        break;
      }
    }
  }
  return stack.back();
}

}  // namespace sgrk
