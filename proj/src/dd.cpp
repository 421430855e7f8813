#include "sgrk/dd.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "sgrk/error.hpp"

namespace sgrk {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::syntax: return "syntax-error";
    case ErrorKind::unknown_variable: return "unknown-variable";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::separation: return "separation-violation";
    case ErrorKind::deadlock: return "deadlock";
    case ErrorKind::unsatisfiable_init: return "unsatisfiable-initial-condition";
    case ErrorKind::not_weak: return "not-weak";
    case ErrorKind::budget_exceeded: return "budget-exceeded";
    case ErrorKind::limit_exceeded: return "limit-exceeded";
    case ErrorKind::illegal_input: return "illegal-input";
    case ErrorKind::controller_undefined: return "controller-undefined";
    case ErrorKind::alphabet_mismatch: return "alphabet-mismatch";
    case ErrorKind::not_invertible: return "not-invertible";
    case ErrorKind::export_too_large: return "export-too-large";
    case ErrorKind::io: return "io-error";
    case ErrorKind::internal: return "internal-error";
  }
  return "error";
}

}  // namespace sgrk

namespace sgrk::dd {

namespace {

enum : std::uint8_t {
  kOpAnd = 1,
  kOpOr,
  kOpXor,
  kOpNot,
  kOpIte,
  kOpExists,
  kOpForall,
  kOpAndExists,
};

inline std::uint64_t mix(std::uint64_t h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

inline std::uint64_t hash3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix(a * 0x9e3779b97f4a7c15ULL ^ mix(b + 0x632be59bd9b4e019ULL) ^ (c << 17) ^ (c >> 47));
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// VarRegistry

std::size_t VarRegistry::declare(std::string name, Role role) {
  if (name.empty()) throw Error(ErrorKind::invalid_argument, "empty variable name");
  if (name.back() == '\'') {
    throw Error(ErrorKind::invalid_argument, "variable name may not end in a prime: " + name);
  }
  if (role == Role::auxiliary) {
    throw Error(ErrorKind::invalid_argument, "declared variables are inputs or outputs");
  }
  if (index_.count(name) != 0) {
    throw Error(ErrorKind::invalid_argument, "duplicate variable: " + name);
  }
  index_.emplace(name, names_.size());
  names_.push_back(std::move(name));
  roles_.push_back(role);
  return names_.size() - 1;
}

std::optional<std::size_t> VarRegistry::find(std::string_view base_name) const {
  auto it = index_.find(std::string(base_name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VarId VarRegistry::lookup(std::string_view name) const {
  std::size_t primes = 0;
  while (primes < name.size() && name[name.size() - 1 - primes] == '\'') ++primes;
  if (primes > 2) throw Error(ErrorKind::unknown_variable, "unknown variable: " + std::string(name));
  auto base = find(name.substr(0, name.size() - primes));
  if (!base) throw Error(ErrorKind::unknown_variable, "unknown variable: " + std::string(name));
  return var(*base, static_cast<Copy>(primes));
}

std::string VarRegistry::var_name(VarId v) const {
  std::string out = base_name(base_of(v));
  out.append(static_cast<std::size_t>(copy_of(v)), '\'');
  return out;
}

Role VarRegistry::role(VarId v) const {
  if (copy_of(v) == Copy::aux) return Role::auxiliary;
  return base_role(base_of(v));
}

VarId VarRegistry::partner(VarId v) const {
  switch (copy_of(v)) {
    case Copy::current: return var(base_of(v), Copy::next);
    case Copy::next: return var(base_of(v), Copy::current);
    case Copy::aux: break;
  }
  throw Error(ErrorKind::invalid_argument, "auxiliary copy has no primed partner: " + var_name(v));
}

std::vector<VarId> VarRegistry::vars(Copy copy) const {
  std::vector<VarId> out;
  out.reserve(size());
  for (std::size_t b = 0; b < size(); ++b) out.push_back(var(b, copy));
  return out;
}

std::vector<VarId> VarRegistry::vars(Copy copy, Role role) const {
  std::vector<VarId> out;
  for (std::size_t b = 0; b < size(); ++b) {
    if (roles_[b] == role) out.push_back(var(b, copy));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Renaming

Renaming Renaming::shift(const VarRegistry& reg, Copy from, Copy to) {
  std::vector<std::pair<VarId, VarId>> pairs;
  for (std::size_t b = 0; b < reg.size(); ++b) {
    pairs.emplace_back(VarRegistry::var(b, from), VarRegistry::var(b, to));
  }
  return Renaming(std::move(pairs));
}

Renaming Renaming::shift(std::span<const VarId> from, std::span<const VarId> to) {
  if (from.size() != to.size()) {
    throw Error(ErrorKind::invalid_argument, "renaming needs equally sized variable lists");
  }
  std::vector<std::pair<VarId, VarId>> pairs;
  for (std::size_t k = 0; k < from.size(); ++k) pairs.emplace_back(from[k], to[k]);
  return Renaming(std::move(pairs));
}

Renaming Renaming::swap(const VarRegistry& reg, Copy a, Copy b) {
  std::vector<std::pair<VarId, VarId>> pairs;
  for (std::size_t v = 0; v < reg.size(); ++v) {
    pairs.emplace_back(VarRegistry::var(v, a), VarRegistry::var(v, b));
    pairs.emplace_back(VarRegistry::var(v, b), VarRegistry::var(v, a));
  }
  return Renaming(std::move(pairs));
}

// ---------------------------------------------------------------------------
// Bdd handle

Bdd::Bdd(Manager* mgr, std::uint32_t node) : mgr_(mgr), node_(node) { link(); }

Bdd::Bdd(const Bdd& other) : mgr_(other.mgr_), node_(other.node_) { link(); }

Bdd::Bdd(Bdd&& other) noexcept : mgr_(other.mgr_), node_(other.node_) {
  link();
  other.unlink();
  other.mgr_ = nullptr;
  other.node_ = 0;
}

Bdd& Bdd::operator=(const Bdd& other) {
  if (this == &other) return *this;
  if (mgr_ != other.mgr_) {
    unlink();
    mgr_ = other.mgr_;
    node_ = other.node_;
    link();
  } else {
    node_ = other.node_;
  }
  return *this;
}

Bdd& Bdd::operator=(Bdd&& other) noexcept {
  if (this == &other) return *this;
  *this = static_cast<const Bdd&>(other);
  other.unlink();
  other.mgr_ = nullptr;
  other.node_ = 0;
  return *this;
}

Bdd::~Bdd() { unlink(); }

void Bdd::link() {
  if (mgr_ == nullptr) return;
  prev_ = nullptr;
  next_ = mgr_->handles_;
  if (next_ != nullptr) next_->prev_ = this;
  mgr_->handles_ = this;
}

void Bdd::unlink() {
  if (mgr_ == nullptr) return;
  if (prev_ != nullptr) {
    prev_->next_ = next_;
  } else {
    mgr_->handles_ = next_;
  }
  if (next_ != nullptr) next_->prev_ = prev_;
  prev_ = next_ = nullptr;
}

bool Bdd::is_true() const { return mgr_ != nullptr && node_ == Manager::kTrue; }
bool Bdd::is_false() const { return mgr_ != nullptr && node_ == Manager::kFalse; }

Bdd Bdd::operator&(const Bdd& rhs) const { return mgr_->apply(BinOp::conj, *this, rhs); }
Bdd Bdd::operator|(const Bdd& rhs) const { return mgr_->apply(BinOp::disj, *this, rhs); }
Bdd Bdd::operator!() const { return mgr_->negate(*this); }
Bdd Bdd::implies(const Bdd& rhs) const { return mgr_->apply(BinOp::implies, *this, rhs); }
Bdd Bdd::iff(const Bdd& rhs) const { return mgr_->apply(BinOp::iff, *this, rhs); }
Bdd& Bdd::operator&=(const Bdd& rhs) { return *this = *this & rhs; }
Bdd& Bdd::operator|=(const Bdd& rhs) { return *this = *this | rhs; }

// ---------------------------------------------------------------------------
// Manager: store

Manager::Manager(VarRegistry registry, ManagerOptions options)
    : registry_(std::move(registry)),
      options_(options),
      gc_threshold_(options.gc_threshold),
      reorder_threshold_(std::size_t{1} << 14) {
  std::size_t cap = next_pow2(std::max<std::size_t>(options.initial_nodes, 1024));
  store_.nodes.reserve(cap);
  store_.nodes.push_back({kTerminalVar, kFalse, kFalse, 0});
  store_.nodes.push_back({kTerminalVar, kTrue, kTrue, 0});
  store_.buckets.assign(cap, 0);
  store_.cache.assign(std::size_t{1} << 18, CacheEntry{});
  for (VarId v = 0; v < registry_.var_count(); ++v) {
    var_level_.push_back(v);
    level_var_.push_back(v);
  }
}

Manager::~Manager() {
  for (Bdd* h = handles_; h != nullptr;) {
    Bdd* next = h->next_;
    h->mgr_ = nullptr;
    h->prev_ = h->next_ = nullptr;
    h = next;
  }
}

std::size_t Manager::declare(std::string name, Role role) {
  std::size_t base = registry_.declare(std::move(name), role);
  for (std::size_t c = 0; c < kCopies; ++c) {
    VarId v = VarRegistry::var(base, static_cast<Copy>(c));
    var_level_.push_back(level_var_.size());
    level_var_.push_back(v);
  }
  return base;
}

std::size_t Manager::handle_count() const {
  std::size_t n = 0;
  for (const Bdd* h = handles_; h != nullptr; h = h->next_) ++n;
  return n;
}

void Manager::check(const Bdd& a) const {
  if (a.mgr_ != this) {
    throw Error(ErrorKind::invalid_argument,
                a.mgr_ == nullptr ? "null diagram handle" : "registry mismatch");
  }
}

void Manager::begin_op() {
  if (reordering_) return;
  if (store_.live > gc_threshold_) {
    collect_garbage();
    if (store_.live * 2 > gc_threshold_) gc_threshold_ *= 2;
  }
  if (options_.auto_reorder && store_.live > reorder_threshold_) {
    collect_garbage();
    if (store_.live > reorder_threshold_) {
      reorder();
      reorder_threshold_ = std::max(reorder_threshold_, store_.live * 2);
    }
  }
}

std::size_t Manager::level_of(std::uint32_t node) const {
  if (node <= kTrue) return std::numeric_limits<std::size_t>::max();
  return var_level_[store_.nodes[node].var];
}

std::uint32_t Manager::mk(VarId var, std::uint32_t lo, std::uint32_t hi) {
  if (lo == hi) return lo;
  std::size_t mask = store_.buckets.size() - 1;
  std::size_t slot = hash3(var, lo, hi) & mask;
  for (std::uint32_t n = store_.buckets[slot]; n != 0; n = store_.nodes[n].next) {
    const Node& node = store_.nodes[n];
    if (node.var == var && node.lo == lo && node.hi == hi) return n;
  }
  std::uint32_t idx;
  if (store_.free_list != 0) {
    idx = store_.free_list;
    store_.free_list = store_.nodes[idx].next;
    store_.nodes[idx] = {var, lo, hi, store_.buckets[slot]};
  } else {
    if (store_.nodes.size() >= std::numeric_limits<std::uint32_t>::max() - 2) {
      throw Error(ErrorKind::internal, "diagram node store exhausted");
    }
    idx = static_cast<std::uint32_t>(store_.nodes.size());
    store_.nodes.push_back({var, lo, hi, store_.buckets[slot]});
  }
  store_.buckets[slot] = idx;
  ++store_.live;
  if (store_.live > store_.buckets.size()) grow_buckets();
  return idx;
}

void Manager::grow_buckets() {
  std::size_t size = store_.buckets.size() * 2;
  store_.buckets.assign(size, 0);
  for (std::uint32_t n = 2; n < store_.nodes.size(); ++n) {
    Node& node = store_.nodes[n];
    if (node.var == kFreeVar) continue;
    std::size_t slot = hash3(node.var, node.lo, node.hi) & (size - 1);
    node.next = store_.buckets[slot];
    store_.buckets[slot] = n;
  }
  std::size_t want = std::min<std::size_t>(size / 2, std::size_t{1} << 23);
  if (want > store_.cache.size()) store_.cache.assign(want, CacheEntry{});
}

void Manager::collect_garbage() {
  std::vector<std::uint8_t> mark(store_.nodes.size(), 0);
  mark[kFalse] = mark[kTrue] = 1;
  std::vector<std::uint32_t> stack;
  for (const Bdd* h = handles_; h != nullptr; h = h->next_) stack.push_back(h->node_);
  while (!stack.empty()) {
    std::uint32_t n = stack.back();
    stack.pop_back();
    if (mark[n]) continue;
    mark[n] = 1;
    stack.push_back(store_.nodes[n].lo);
    stack.push_back(store_.nodes[n].hi);
  }
  std::fill(store_.buckets.begin(), store_.buckets.end(), 0);
  store_.free_list = 0;
  store_.live = 0;
  std::size_t mask = store_.buckets.size() - 1;
  for (std::size_t n = store_.nodes.size(); n-- > 2;) {
    Node& node = store_.nodes[n];
    if (!mark[n]) {
      node.var = kFreeVar;
      node.next = store_.free_list;
      store_.free_list = static_cast<std::uint32_t>(n);
      continue;
    }
    std::size_t slot = hash3(node.var, node.lo, node.hi) & mask;
    node.next = store_.buckets[slot];
    store_.buckets[slot] = static_cast<std::uint32_t>(n);
    ++store_.live;
  }
  std::fill(store_.cache.begin(), store_.cache.end(), CacheEntry{});
}

bool Manager::cache_lookup(std::uint8_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                           std::uint32_t& out) const {
  const CacheEntry& e =
      store_.cache[hash3((std::uint64_t{op} << 32) | a, b, c) & (store_.cache.size() - 1)];
  if (e.op == op && e.a == a && e.b == b && e.c == c) {
    out = e.result;
    return true;
  }
  return false;
}

void Manager::cache_insert(std::uint8_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                           std::uint32_t result) {
  CacheEntry& e =
      store_.cache[hash3((std::uint64_t{op} << 32) | a, b, c) & (store_.cache.size() - 1)];
  e = {a, b, c, result, op};
}

std::uint32_t Manager::cube_node(std::span<const VarId> vars) {
  std::vector<VarId> sorted(vars.begin(), vars.end());
  for (VarId v : sorted) {
    if (v >= registry_.var_count()) {
      throw Error(ErrorKind::unknown_variable, "unknown variable id " + std::to_string(v));
    }
  }
  std::sort(sorted.begin(), sorted.end(),
            [&](VarId a, VarId b) { return var_level_[a] > var_level_[b]; });
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::uint32_t r = kTrue;
  for (VarId v : sorted) r = mk(v, kFalse, r);
  return r;
}

// ---------------------------------------------------------------------------
// Manager: recursive algorithms

std::uint32_t Manager::and_rec(std::uint32_t f, std::uint32_t g) {
  if (f == kFalse || g == kFalse) return kFalse;
  if (f == kTrue) return g;
  if (g == kTrue || f == g) return f;
  if (f > g) std::swap(f, g);
  std::uint32_t r;
  if (cache_lookup(kOpAnd, f, g, 0, r)) return r;
  std::size_t lf = level_of(f), lg = level_of(g);
  std::size_t top = std::min(lf, lg);
  VarId v = level_var_[top];
  Node nf = store_.nodes[f], ng = store_.nodes[g];
  std::uint32_t f0 = lf == top ? nf.lo : f, f1 = lf == top ? nf.hi : f;
  std::uint32_t g0 = lg == top ? ng.lo : g, g1 = lg == top ? ng.hi : g;
  std::uint32_t lo = and_rec(f0, g0);
  std::uint32_t hi = and_rec(f1, g1);
  r = mk(v, lo, hi);
  cache_insert(kOpAnd, f, g, 0, r);
  return r;
}

std::uint32_t Manager::or_rec(std::uint32_t f, std::uint32_t g) {
  if (f == kTrue || g == kTrue) return kTrue;
  if (f == kFalse) return g;
  if (g == kFalse || f == g) return f;
  if (f > g) std::swap(f, g);
  std::uint32_t r;
  if (cache_lookup(kOpOr, f, g, 0, r)) return r;
  std::size_t lf = level_of(f), lg = level_of(g);
  std::size_t top = std::min(lf, lg);
  VarId v = level_var_[top];
  Node nf = store_.nodes[f], ng = store_.nodes[g];
  std::uint32_t f0 = lf == top ? nf.lo : f, f1 = lf == top ? nf.hi : f;
  std::uint32_t g0 = lg == top ? ng.lo : g, g1 = lg == top ? ng.hi : g;
  std::uint32_t lo = or_rec(f0, g0);
  std::uint32_t hi = or_rec(f1, g1);
  r = mk(v, lo, hi);
  cache_insert(kOpOr, f, g, 0, r);
  return r;
}

std::uint32_t Manager::xor_rec(std::uint32_t f, std::uint32_t g) {
  if (f == g) return kFalse;
  if (f == kFalse) return g;
  if (g == kFalse) return f;
  if (f == kTrue) return not_rec(g);
  if (g == kTrue) return not_rec(f);
  if (f > g) std::swap(f, g);
  std::uint32_t r;
  if (cache_lookup(kOpXor, f, g, 0, r)) return r;
  std::size_t lf = level_of(f), lg = level_of(g);
  std::size_t top = std::min(lf, lg);
  VarId v = level_var_[top];
  Node nf = store_.nodes[f], ng = store_.nodes[g];
  std::uint32_t f0 = lf == top ? nf.lo : f, f1 = lf == top ? nf.hi : f;
  std::uint32_t g0 = lg == top ? ng.lo : g, g1 = lg == top ? ng.hi : g;
  std::uint32_t lo = xor_rec(f0, g0);
  std::uint32_t hi = xor_rec(f1, g1);
  r = mk(v, lo, hi);
  cache_insert(kOpXor, f, g, 0, r);
  return r;
}

std::uint32_t Manager::not_rec(std::uint32_t f) {
  if (f == kFalse) return kTrue;
  if (f == kTrue) return kFalse;
  std::uint32_t r;
  if (cache_lookup(kOpNot, f, 0, 0, r)) return r;
  Node n = store_.nodes[f];
  std::uint32_t lo = not_rec(n.lo);
  std::uint32_t hi = not_rec(n.hi);
  r = mk(n.var, lo, hi);
  cache_insert(kOpNot, f, 0, 0, r);
  return r;
}

std::uint32_t Manager::ite_rec(std::uint32_t f, std::uint32_t g, std::uint32_t h) {
  if (f == kTrue) return g;
  if (f == kFalse) return h;
  if (g == h) return g;
  if (g == kTrue && h == kFalse) return f;
  if (g == kFalse && h == kTrue) return not_rec(f);
  if (g == kTrue) return or_rec(f, h);
  if (g == kFalse) return and_rec(not_rec(f), h);
  if (h == kFalse) return and_rec(f, g);
  if (h == kTrue) return or_rec(not_rec(f), g);
  std::uint32_t r;
  if (cache_lookup(kOpIte, f, g, h, r)) return r;
  std::size_t lf = level_of(f), lg = level_of(g), lh = level_of(h);
  std::size_t top = std::min({lf, lg, lh});
  VarId v = level_var_[top];
  Node nf = store_.nodes[f], ng = store_.nodes[g], nh = store_.nodes[h];
  std::uint32_t f0 = lf == top ? nf.lo : f, f1 = lf == top ? nf.hi : f;
  std::uint32_t g0 = lg == top ? ng.lo : g, g1 = lg == top ? ng.hi : g;
  std::uint32_t h0 = lh == top ? nh.lo : h, h1 = lh == top ? nh.hi : h;
  std::uint32_t lo = ite_rec(f0, g0, h0);
  std::uint32_t hi = ite_rec(f1, g1, h1);
  r = mk(v, lo, hi);
  cache_insert(kOpIte, f, g, h, r);
  return r;
}

std::uint32_t Manager::exists_rec(std::uint32_t f, std::uint32_t cube) {
  if (f <= kTrue || cube == kTrue) return f;
  std::size_t lf = level_of(f);
  while (cube != kTrue && level_of(cube) < lf) cube = store_.nodes[cube].hi;
  if (cube == kTrue) return f;
  std::uint32_t r;
  if (cache_lookup(kOpExists, f, cube, 0, r)) return r;
  Node n = store_.nodes[f];
  if (store_.nodes[cube].var == n.var) {
    std::uint32_t rest = store_.nodes[cube].hi;
    std::uint32_t lo = exists_rec(n.lo, rest);
    r = lo == kTrue ? kTrue : or_rec(lo, exists_rec(n.hi, rest));
  } else {
    std::uint32_t lo = exists_rec(n.lo, cube);
    std::uint32_t hi = exists_rec(n.hi, cube);
    r = mk(n.var, lo, hi);
  }
  cache_insert(kOpExists, f, cube, 0, r);
  return r;
}

std::uint32_t Manager::forall_rec(std::uint32_t f, std::uint32_t cube) {
  if (f <= kTrue || cube == kTrue) return f;
  std::size_t lf = level_of(f);
  while (cube != kTrue && level_of(cube) < lf) cube = store_.nodes[cube].hi;
  if (cube == kTrue) return f;
  std::uint32_t r;
  if (cache_lookup(kOpForall, f, cube, 0, r)) return r;
  Node n = store_.nodes[f];
  if (store_.nodes[cube].var == n.var) {
    std::uint32_t rest = store_.nodes[cube].hi;
    std::uint32_t lo = forall_rec(n.lo, rest);
    r = lo == kFalse ? kFalse : and_rec(lo, forall_rec(n.hi, rest));
  } else {
    std::uint32_t lo = forall_rec(n.lo, cube);
    std::uint32_t hi = forall_rec(n.hi, cube);
    r = mk(n.var, lo, hi);
  }
  cache_insert(kOpForall, f, cube, 0, r);
  return r;
}

std::uint32_t Manager::and_exists_rec(std::uint32_t f, std::uint32_t g, std::uint32_t cube) {
  if (f == kFalse || g == kFalse) return kFalse;
  if (cube == kTrue) return and_rec(f, g);
  if (f == kTrue && g == kTrue) return kTrue;
  if (f == kTrue || f == g) return exists_rec(g, cube);
  if (g == kTrue) return exists_rec(f, cube);
  if (f > g) std::swap(f, g);
  std::size_t lf = level_of(f), lg = level_of(g);
  std::size_t top = std::min(lf, lg);
  while (cube != kTrue && level_of(cube) < top) cube = store_.nodes[cube].hi;
  if (cube == kTrue) return and_rec(f, g);
  std::uint32_t r;
  if (cache_lookup(kOpAndExists, f, g, cube, r)) return r;
  VarId v = level_var_[top];
  Node nf = store_.nodes[f], ng = store_.nodes[g];
  std::uint32_t f0 = lf == top ? nf.lo : f, f1 = lf == top ? nf.hi : f;
  std::uint32_t g0 = lg == top ? ng.lo : g, g1 = lg == top ? ng.hi : g;
  if (store_.nodes[cube].var == v) {
    std::uint32_t rest = store_.nodes[cube].hi;
    std::uint32_t lo = and_exists_rec(f0, g0, rest);
    r = lo == kTrue ? kTrue : or_rec(lo, and_exists_rec(f1, g1, rest));
  } else {
    std::uint32_t lo = and_exists_rec(f0, g0, cube);
    std::uint32_t hi = and_exists_rec(f1, g1, cube);
    r = mk(v, lo, hi);
  }
  cache_insert(kOpAndExists, f, g, cube, r);
  return r;
}

std::uint32_t Manager::cofactor_rec(std::uint32_t f, VarId v, bool value) {
  std::size_t lv = var_level_[v];
  std::unordered_map<std::uint32_t, std::uint32_t> memo;
  auto rec = [&](auto&& self, std::uint32_t n) -> std::uint32_t {
    std::size_t ln = level_of(n);
    if (ln > lv) return n;
    Node node = store_.nodes[n];
    if (ln == lv) return value ? node.hi : node.lo;
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    std::uint32_t lo = self(self, node.lo);
    std::uint32_t hi = self(self, node.hi);
    std::uint32_t r = mk(node.var, lo, hi);
    memo.emplace(n, r);
    return r;
  };
  return rec(rec, f);
}

std::uint32_t Manager::project(std::uint32_t f, std::span<const VarId> keep) {
  std::vector<bool> kept(registry_.var_count(), false);
  for (VarId v : keep) {
    if (v >= kept.size()) throw Error(ErrorKind::unknown_variable, "unknown variable id");
    kept[v] = true;
  }
  std::vector<VarId> drop;
  Bdd tmp = wrap(f);
  for (VarId v : support(tmp)) {
    if (!kept[v]) drop.push_back(v);
  }
  if (drop.empty()) return f;
  return exists_rec(f, cube_node(drop));
}

// ---------------------------------------------------------------------------
// Manager: public operations

Bdd Manager::one() { return wrap(kTrue); }
Bdd Manager::zero() { return wrap(kFalse); }

Bdd Manager::var(std::string_view name) { return var(registry_.lookup(name)); }

Bdd Manager::var(VarId v) { return literal(v, true); }

Bdd Manager::literal(VarId v, bool positive) {
  if (v >= registry_.var_count()) {
    throw Error(ErrorKind::unknown_variable, "unknown variable id " + std::to_string(v));
  }
  begin_op();
  return wrap(positive ? mk(v, kFalse, kTrue) : mk(v, kTrue, kFalse));
}

Bdd Manager::cube(std::span<const VarId> vars, const std::vector<bool>& values) {
  if (vars.size() != values.size()) {
    throw Error(ErrorKind::invalid_argument, "cube: variable/value count mismatch");
  }
  begin_op();
  std::vector<std::size_t> idx(vars.size());
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (vars[k] >= registry_.var_count()) {
      throw Error(ErrorKind::unknown_variable, "unknown variable id");
    }
    idx[k] = k;
  }
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return var_level_[vars[a]] > var_level_[vars[b]]; });
  std::uint32_t r = kTrue;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    VarId v = vars[idx[k]];
    if (k > 0 && vars[idx[k - 1]] == v) {
      if (values[idx[k - 1]] != values[idx[k]]) return zero();
      continue;
    }
    r = values[idx[k]] ? mk(v, kFalse, r) : mk(v, r, kFalse);
  }
  return wrap(r);
}

Bdd Manager::apply(BinOp op, const Bdd& a, const Bdd& b) {
  check(a);
  check(b);
  begin_op();
  ++ops_;
  switch (op) {
    case BinOp::conj: return wrap(and_rec(a.node_, b.node_));
    case BinOp::disj: return wrap(or_rec(a.node_, b.node_));
    case BinOp::implies: return wrap(or_rec(not_rec(a.node_), b.node_));
    case BinOp::iff: return wrap(not_rec(xor_rec(a.node_, b.node_)));
  }
  throw Error(ErrorKind::internal, "unknown binary operation");
}

Bdd Manager::negate(const Bdd& a) {
  check(a);
  begin_op();
  ++ops_;
  return wrap(not_rec(a.node_));
}

Bdd Manager::ite(const Bdd& f, const Bdd& g, const Bdd& h) {
  check(f);
  check(g);
  check(h);
  begin_op();
  ++ops_;
  return wrap(ite_rec(f.node_, g.node_, h.node_));
}

Bdd Manager::quantify(Quant kind, std::span<const VarId> vars, const Bdd& a) {
  check(a);
  begin_op();
  ++ops_;
  std::uint32_t cube = cube_node(vars);
  return wrap(kind == Quant::exists ? exists_rec(a.node_, cube) : forall_rec(a.node_, cube));
}

Bdd Manager::and_exists(const Bdd& a, const Bdd& b, std::span<const VarId> vars) {
  check(a);
  check(b);
  begin_op();
  ++ops_;
  std::uint32_t cube = cube_node(vars);
  return wrap(and_exists_rec(a.node_, b.node_, cube));
}

Bdd Manager::rename(const Bdd& a, const Renaming& renaming) {
  check(a);
  begin_op();
  ++ops_;
  const std::size_t nvars = registry_.var_count();
  std::vector<VarId> map(nvars);
  for (VarId v = 0; v < nvars; ++v) map[v] = v;
  std::vector<bool> mapped(nvars, false);
  for (auto [from, to] : renaming.pairs()) {
    if (from >= nvars || to >= nvars) throw Error(ErrorKind::unknown_variable, "rename: unknown variable");
    if (mapped[from] && map[from] != to) {
      throw Error(ErrorKind::invalid_argument, "rename: variable mapped twice: " + registry_.var_name(from));
    }
    mapped[from] = true;
    map[from] = to;
  }
  std::vector<VarId> supp = support(a);
  std::vector<bool> seen(nvars, false);
  for (VarId v : supp) {
    if (seen[map[v]]) {
      throw Error(ErrorKind::invalid_argument,
                  "rename: pairing is not injective on the support (" + registry_.var_name(v) + ")");
    }
    seen[map[v]] = true;
  }
  std::sort(supp.begin(), supp.end(), [&](VarId x, VarId y) { return var_level_[x] < var_level_[y]; });
  bool monotone = true;
  for (std::size_t k = 1; k < supp.size(); ++k) {
    if (var_level_[map[supp[k - 1]]] >= var_level_[map[supp[k]]]) monotone = false;
  }
  std::unordered_map<std::uint32_t, std::uint32_t> memo;
  auto rec = [&](auto&& self, std::uint32_t n) -> std::uint32_t {
    if (n <= kTrue) return n;
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    Node node = store_.nodes[n];
    std::uint32_t lo = self(self, node.lo);
    std::uint32_t hi = self(self, node.hi);
    std::uint32_t r = monotone ? mk(map[node.var], lo, hi)
                               : ite_rec(mk(map[node.var], kFalse, kTrue), hi, lo);
    memo.emplace(n, r);
    return r;
  };
  return wrap(rec(rec, a.node_));
}

Bdd Manager::cofactor(const Bdd& a, std::span<const VarId> vars, const std::vector<bool>& values) {
  check(a);
  if (vars.size() != values.size()) {
    throw Error(ErrorKind::invalid_argument, "cofactor: variable/value count mismatch");
  }
  begin_op();
  ++ops_;
  // 0 = free, 1 = false, 2 = true
  std::vector<std::uint8_t> fixed(registry_.var_count(), 0);
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (vars[k] >= registry_.var_count()) throw Error(ErrorKind::unknown_variable, "unknown variable id");
    fixed[vars[k]] = values[k] ? 2 : 1;
  }
  std::unordered_map<std::uint32_t, std::uint32_t> memo;
  auto rec = [&](auto&& self, std::uint32_t n) -> std::uint32_t {
    if (n <= kTrue) return n;
    Node node = store_.nodes[n];
    if (fixed[node.var] != 0) return self(self, fixed[node.var] == 2 ? node.hi : node.lo);
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    std::uint32_t lo = self(self, node.lo);
    std::uint32_t hi = self(self, node.hi);
    std::uint32_t r = mk(node.var, lo, hi);
    memo.emplace(n, r);
    return r;
  };
  return wrap(rec(rec, a.node_));
}

// ---------------------------------------------------------------------------
// Manager: queries

bool Manager::eval(const Bdd& a, const std::vector<bool>& values_by_var) const {
  check(a);
  if (values_by_var.size() < registry_.var_count()) {
    throw Error(ErrorKind::invalid_argument, "eval: assignment does not cover every variable");
  }
  std::uint32_t n = a.node_;
  while (n > kTrue) {
    const Node& node = store_.nodes[n];
    n = values_by_var[node.var] ? node.hi : node.lo;
  }
  return n == kTrue;
}

std::vector<VarId> Manager::support(const Bdd& a) const {
  check(a);
  std::vector<bool> in(registry_.var_count(), false);
  std::vector<bool> visited(store_.nodes.size(), false);
  std::vector<std::uint32_t> stack{a.node_};
  while (!stack.empty()) {
    std::uint32_t n = stack.back();
    stack.pop_back();
    if (n <= kTrue || visited[n]) continue;
    visited[n] = true;
    in[store_.nodes[n].var] = true;
    stack.push_back(store_.nodes[n].lo);
    stack.push_back(store_.nodes[n].hi);
  }
  std::vector<VarId> out;
  for (VarId v = 0; v < in.size(); ++v) {
    if (in[v]) out.push_back(v);
  }
  return out;
}

std::size_t Manager::node_count(const Bdd& a) const { return node_count(std::span<const Bdd>(&a, 1)); }

std::size_t Manager::node_count(std::span<const Bdd> roots) const {
  std::vector<bool> visited(store_.nodes.size(), false);
  std::vector<std::uint32_t> stack;
  for (const Bdd& r : roots) {
    check(r);
    stack.push_back(r.node_);
  }
  std::size_t count = 0;
  while (!stack.empty()) {
    std::uint32_t n = stack.back();
    stack.pop_back();
    if (visited[n]) continue;
    visited[n] = true;
    ++count;
    if (n > kTrue) {
      stack.push_back(store_.nodes[n].lo);
      stack.push_back(store_.nodes[n].hi);
    }
  }
  return count;
}

std::uint64_t Manager::sat_count(const Bdd& a, std::span<const VarId> over) {
  check(a);
  if (over.size() >= 64) throw Error(ErrorKind::invalid_argument, "sat_count: more than 63 variables");
  begin_op();
  std::uint32_t f = project(a.node_, over);
  std::vector<VarId> sorted(over.begin(), over.end());
  std::sort(sorted.begin(), sorted.end(), [&](VarId x, VarId y) { return var_level_[x] < var_level_[y]; });
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::size_t> pos_of(registry_.var_count(), 0);
  for (std::size_t k = 0; k < sorted.size(); ++k) pos_of[sorted[k]] = k;
  const std::size_t n = sorted.size();
  auto pos = [&](std::uint32_t node) { return node <= kTrue ? n : pos_of[store_.nodes[node].var]; };
  std::unordered_map<std::uint32_t, std::uint64_t> memo;
  auto rec = [&](auto&& self, std::uint32_t node) -> std::uint64_t {
    if (node == kFalse) return 0;
    if (node == kTrue) return 1;
    auto it = memo.find(node);
    if (it != memo.end()) return it->second;
    Node nd = store_.nodes[node];
    std::size_t p = pos(node);
    std::uint64_t lo = self(self, nd.lo) << (pos(nd.lo) - p - 1);
    std::uint64_t hi = self(self, nd.hi) << (pos(nd.hi) - p - 1);
    memo.emplace(node, lo + hi);
    return lo + hi;
  };
  return rec(rec, f) << pos(f);
}

std::optional<std::vector<bool>> Manager::pick_one(const Bdd& a, std::span<const VarId> over) {
  check(a);
  begin_op();
  std::uint32_t f = project(a.node_, over);
  if (f == kFalse) return std::nullopt;
  std::vector<bool> out;
  out.reserve(over.size());
  for (VarId v : over) {
    std::uint32_t f0 = cofactor_rec(f, v, false);
    if (f0 != kFalse) {
      out.push_back(false);
      f = f0;
    } else {
      out.push_back(true);
      f = cofactor_rec(f, v, true);
    }
  }
  return out;
}

std::vector<std::vector<bool>> Manager::enumerate(const Bdd& a, std::span<const VarId> over,
                                                  std::size_t limit) {
  check(a);
  begin_op();
  std::uint32_t f = project(a.node_, over);
  std::vector<std::vector<bool>> out;
  std::vector<bool> current;
  auto rec = [&](auto&& self, std::uint32_t node, std::size_t k) -> void {
    if (node == kFalse) return;
    if (k == over.size()) {
      if (out.size() >= limit) {
        throw Error(ErrorKind::limit_exceeded,
                    "enumeration exceeds limit of " + std::to_string(limit) + " assignments");
      }
      out.push_back(current);
      return;
    }
    for (bool value : {false, true}) {
      current.push_back(value);
      self(self, cofactor_rec(node, over[k], value), k + 1);
      current.pop_back();
    }
  };
  rec(rec, f, 0);
  return out;
}

std::string Manager::to_dot(const Bdd& a, const std::string& label) const {
  std::vector<std::pair<std::string, Bdd>> roots{{label, a}};
  return to_dot(roots);
}

std::string Manager::to_dot(std::span<const std::pair<std::string, Bdd>> roots) const {
  std::ostringstream out;
  out << "digraph dd {\n";
  out << "  node [shape=circle];\n";
  out << "  n0 [shape=box,label=\"0\"];\n";
  out << "  n1 [shape=box,label=\"1\"];\n";
  std::vector<bool> visited(store_.nodes.size(), false);
  std::vector<std::uint32_t> stack;
  std::size_t k = 0;
  for (const auto& [name, root] : roots) {
    check(root);
    out << "  r" << k << " [shape=plaintext,label=\"" << name << "\"];\n";
    out << "  r" << k << " -> n" << root.node_ << ";\n";
    stack.push_back(root.node_);
    ++k;
  }
  while (!stack.empty()) {
    std::uint32_t n = stack.back();
    stack.pop_back();
    if (n <= kTrue || visited[n]) continue;
    visited[n] = true;
    const Node& node = store_.nodes[n];
    out << "  n" << n << " [label=\"" << registry_.var_name(node.var) << "\"];\n";
    out << "  n" << n << " -> n" << node.hi << ";\n";
    out << "  n" << n << " -> n" << node.lo << " [style=dashed];\n";
    stack.push_back(node.lo);
    stack.push_back(node.hi);
  }
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Manager: variable order

std::vector<VarId> Manager::order() const { return level_var_; }

void Manager::rebuild_with_order(const std::vector<VarId>& order) {
  Store old = std::move(store_);
  store_ = Store{};
  store_.nodes.reserve(old.nodes.capacity());
  store_.nodes.push_back({kTerminalVar, kFalse, kFalse, 0});
  store_.nodes.push_back({kTerminalVar, kTrue, kTrue, 0});
  store_.buckets.assign(old.buckets.size(), 0);
  store_.cache.assign(old.cache.size(), CacheEntry{});
  for (std::size_t l = 0; l < order.size(); ++l) {
    level_var_[l] = order[l];
    var_level_[order[l]] = l;
  }
  std::vector<std::uint32_t> memo(old.nodes.size(), 0xffffffffu);
  memo[kFalse] = kFalse;
  memo[kTrue] = kTrue;
  auto transfer = [&](auto&& self, std::uint32_t n) -> std::uint32_t {
    if (memo[n] != 0xffffffffu) return memo[n];
    Node node = old.nodes[n];
    std::uint32_t lo = self(self, node.lo);
    std::uint32_t hi = self(self, node.hi);
    std::uint32_t r = ite_rec(mk(node.var, kFalse, kTrue), hi, lo);
    memo[n] = r;
    return r;
  };
  for (Bdd* h = handles_; h != nullptr; h = h->next_) h->node_ = transfer(transfer, h->node_);
  collect_garbage();
}

std::size_t Manager::total_live_size() {
  collect_garbage();
  return store_.live;
}

void Manager::reorder() {
  if (reordering_) return;
  reordering_ = true;
  // Window permutation over declared-variable blocks, keeping each block's
  // internal copy order. Every candidate is evaluated by a full rebuild.
  const std::size_t blocks = registry_.size();
  auto block_order = [&]() {
    std::vector<std::size_t> out;
    for (VarId v : level_var_) {
      std::size_t b = VarRegistry::base_of(v);
      if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
    }
    return out;
  };
  auto expand = [&](const std::vector<std::size_t>& bo) {
    std::vector<VarId> out;
    for (std::size_t b : bo) {
      std::vector<VarId> copies;
      for (std::size_t c = 0; c < kCopies; ++c) copies.push_back(VarRegistry::var(b, static_cast<Copy>(c)));
      std::sort(copies.begin(), copies.end(), [&](VarId x, VarId y) { return var_level_[x] < var_level_[y]; });
      out.insert(out.end(), copies.begin(), copies.end());
    }
    return out;
  };
  std::vector<std::size_t> best = block_order();
  std::size_t best_size = total_live_size();
  for (int pass = 0; pass < 3 && blocks > 1; ++pass) {
    bool improved = false;
    for (std::size_t k = 0; k + 1 < blocks; ++k) {
      std::vector<std::size_t> trial = best;
      std::swap(trial[k], trial[k + 1]);
      rebuild_with_order(expand(trial));
      std::size_t size = store_.live;
      if (size < best_size) {
        best = trial;
        best_size = size;
        improved = true;
      } else {
        rebuild_with_order(expand(best));
      }
    }
    if (!improved) break;
  }
  reordering_ = false;
}

}  // namespace sgrk::dd
