#pragma once

// Reduced ordered binary decision diagrams.
//
// Every declared variable v owns three diagram variables: v (current state),
// v' (next state) and v'' (auxiliary copy used for relational composition).
// The default order interleaves the three copies of each declared variable in
// declaration order. Handles register themselves with their manager, which
// uses the live handle set as the garbage-collection root set.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sgrk::dd {

using VarId = std::uint32_t;

enum class Role : std::uint8_t { input, output, auxiliary };
enum class Copy : std::uint8_t { current = 0, next = 1, aux = 2 };

inline constexpr std::size_t kCopies = 3;

class VarRegistry {
 public:
  // Returns the index of the new declared variable.
  std::size_t declare(std::string name, Role role);

  std::size_t size() const { return names_.size(); }
  std::size_t var_count() const { return names_.size() * kCopies; }

  const std::string& base_name(std::size_t base) const { return names_.at(base); }
  Role base_role(std::size_t base) const { return roles_.at(base); }
  std::optional<std::size_t> find(std::string_view base_name) const;

  static VarId var(std::size_t base, Copy copy) {
    return static_cast<VarId>(base * kCopies + static_cast<std::size_t>(copy));
  }
  static std::size_t base_of(VarId v) { return v / kCopies; }
  static Copy copy_of(VarId v) { return static_cast<Copy>(v % kCopies); }

  // Accepts "v", "v'" and "v''"; throws unknown_variable.
  VarId lookup(std::string_view name) const;
  std::string var_name(VarId v) const;
  // Current-state copies carry their declared role; v' and v'' are reported
  // as the declared role and auxiliary respectively.
  Role role(VarId v) const;
  // v <-> v'. The auxiliary copy is its own class and has no partner.
  VarId partner(VarId v) const;

  std::vector<VarId> vars(Copy copy) const;
  std::vector<VarId> vars(Copy copy, Role role) const;

 private:
  std::vector<std::string> names_;
  std::vector<Role> roles_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class BinOp : std::uint8_t { conj, disj, implies, iff };
enum class Quant : std::uint8_t { exists, forall };

class Manager;

class Bdd {
 public:
  Bdd() = default;
  Bdd(const Bdd& other);
  Bdd(Bdd&& other) noexcept;
  Bdd& operator=(const Bdd& other);
  Bdd& operator=(Bdd&& other) noexcept;
  ~Bdd();

  bool is_null() const { return mgr_ == nullptr; }
  bool is_true() const;
  bool is_false() const;
  bool is_const() const { return is_true() || is_false(); }
  Manager* manager() const { return mgr_; }
  std::uint32_t node() const { return node_; }

  Bdd operator&(const Bdd& rhs) const;
  Bdd operator|(const Bdd& rhs) const;
  Bdd operator!() const;
  Bdd implies(const Bdd& rhs) const;
  Bdd iff(const Bdd& rhs) const;
  Bdd& operator&=(const Bdd& rhs);
  Bdd& operator|=(const Bdd& rhs);

  friend bool operator==(const Bdd& a, const Bdd& b) {
    return a.mgr_ == b.mgr_ && a.node_ == b.node_;
  }

 private:
  friend class Manager;
  Bdd(Manager* mgr, std::uint32_t node);
  void link();
  void unlink();

  Manager* mgr_ = nullptr;
  std::uint32_t node_ = 0;
  Bdd* prev_ = nullptr;
  Bdd* next_ = nullptr;
};

// An injective variable substitution.
class Renaming {
 public:
  Renaming() = default;
  explicit Renaming(std::vector<std::pair<VarId, VarId>> pairs) : pairs_(std::move(pairs)) {}

  // Maps every declared variable's `from` copy to its `to` copy.
  static Renaming shift(const VarRegistry& reg, Copy from, Copy to);
  static Renaming shift(std::span<const VarId> from, std::span<const VarId> to);
  // Exchanges the `a` and `b` copies of every declared variable.
  static Renaming swap(const VarRegistry& reg, Copy a, Copy b);

  const std::vector<std::pair<VarId, VarId>>& pairs() const { return pairs_; }

 private:
  std::vector<std::pair<VarId, VarId>> pairs_;
};

struct ManagerOptions {
  bool auto_reorder = false;
  std::size_t initial_nodes = std::size_t{1} << 16;
  std::size_t gc_threshold = std::size_t{1} << 22;
};

class Manager {
 public:
  explicit Manager(VarRegistry registry = {}, ManagerOptions options = {});
  Manager(const Manager&) = delete;
  Manager& operator=(const Manager&) = delete;
  ~Manager();

  const VarRegistry& registry() const { return registry_; }
  // Appends a declared variable (three diagram variables) at the bottom of the order.
  std::size_t declare(std::string name, Role role);

  Bdd one();
  Bdd zero();
  Bdd constant(bool value) { return value ? one() : zero(); }
  Bdd var(std::string_view name);
  Bdd var(VarId v);
  Bdd literal(VarId v, bool positive);
  // Conjunction of literals; `values[k]` is the polarity of `vars[k]`.
  Bdd cube(std::span<const VarId> vars, const std::vector<bool>& values);

  // Counted kernel operations: one unit per call.
  Bdd apply(BinOp op, const Bdd& a, const Bdd& b);
  Bdd negate(const Bdd& a);
  Bdd ite(const Bdd& f, const Bdd& g, const Bdd& h);
  Bdd quantify(Quant kind, std::span<const VarId> vars, const Bdd& a);
  Bdd exists(std::span<const VarId> vars, const Bdd& a) { return quantify(Quant::exists, vars, a); }
  Bdd forall(std::span<const VarId> vars, const Bdd& a) { return quantify(Quant::forall, vars, a); }
  // exists vars . (a & b) without building the conjunction.
  Bdd and_exists(const Bdd& a, const Bdd& b, std::span<const VarId> vars);
  Bdd rename(const Bdd& a, const Renaming& renaming);
  Bdd cofactor(const Bdd& a, std::span<const VarId> vars, const std::vector<bool>& values);

  // Queries. These do not count as symbolic operations.
  bool eval(const Bdd& a, const std::vector<bool>& values_by_var) const;
  std::vector<VarId> support(const Bdd& a) const;
  std::size_t node_count(const Bdd& a) const;
  std::size_t node_count(std::span<const Bdd> roots) const;
  // Variables outside `over` are projected away existentially first.
  std::uint64_t sat_count(const Bdd& a, std::span<const VarId> over);
  // Lexicographically smallest model over `over` (first entry most significant, false < true).
  std::optional<std::vector<bool>> pick_one(const Bdd& a, std::span<const VarId> over);
  // All models in lexicographic order; throws limit_exceeded past `limit`.
  std::vector<std::vector<bool>> enumerate(const Bdd& a, std::span<const VarId> over,
                                           std::size_t limit);

  std::string to_dot(std::span<const std::pair<std::string, Bdd>> roots) const;
  std::string to_dot(const Bdd& a, const std::string& label) const;

  std::uint64_t op_count() const { return ops_; }
  void reset_op_count() { ops_ = 0; }

  // Variable order, top first.
  std::vector<VarId> order() const;
  std::size_t level(VarId v) const { return var_level_.at(v); }
  // Block-wise reordering (the three copies of a declared variable move together).
  void reorder();
  void set_auto_reorder(bool on) { options_.auto_reorder = on; }
  bool auto_reorder() const { return options_.auto_reorder; }

  std::size_t live_nodes() const { return store_.live; }
  std::size_t handle_count() const;
  void collect_garbage();

 private:
  friend class Bdd;

  struct Node {
    VarId var;
    std::uint32_t lo;
    std::uint32_t hi;
    std::uint32_t next;
  };
  struct CacheEntry {
    std::uint32_t a = 0, b = 0, c = 0, result = 0;
    std::uint8_t op = 0;
  };
  struct Store {
    std::vector<Node> nodes;
    std::vector<std::uint32_t> buckets;
    std::vector<CacheEntry> cache;
    std::uint32_t free_list = 0;
    std::size_t live = 0;
  };

  static constexpr std::uint32_t kFalse = 0;
  static constexpr std::uint32_t kTrue = 1;
  static constexpr VarId kTerminalVar = 0xffffffffu;
  static constexpr VarId kFreeVar = 0xfffffffeu;

  Bdd wrap(std::uint32_t node) { return Bdd(this, node); }
  void check(const Bdd& a) const;
  void begin_op();

  std::size_t level_of(std::uint32_t node) const;
  std::uint32_t mk(VarId var, std::uint32_t lo, std::uint32_t hi);
  void grow_buckets();
  std::uint32_t cube_node(std::span<const VarId> vars);

  bool cache_lookup(std::uint8_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                    std::uint32_t& out) const;
  void cache_insert(std::uint8_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                    std::uint32_t result);

  std::uint32_t and_rec(std::uint32_t f, std::uint32_t g);
  std::uint32_t or_rec(std::uint32_t f, std::uint32_t g);
  std::uint32_t xor_rec(std::uint32_t f, std::uint32_t g);
  std::uint32_t not_rec(std::uint32_t f);
  std::uint32_t ite_rec(std::uint32_t f, std::uint32_t g, std::uint32_t h);
  std::uint32_t exists_rec(std::uint32_t f, std::uint32_t cube);
  std::uint32_t forall_rec(std::uint32_t f, std::uint32_t cube);
  std::uint32_t and_exists_rec(std::uint32_t f, std::uint32_t g, std::uint32_t cube);
  std::uint32_t cofactor_rec(std::uint32_t f, VarId v, bool value);
  std::uint32_t project(std::uint32_t f, std::span<const VarId> keep);

  void rebuild_with_order(const std::vector<VarId>& order);
  std::size_t total_live_size();

  VarRegistry registry_;
  ManagerOptions options_;
  Store store_;
  std::vector<std::size_t> var_level_;
  std::vector<VarId> level_var_;
  Bdd* handles_ = nullptr;
  std::uint64_t ops_ = 0;
  std::size_t gc_threshold_;
  std::size_t reorder_threshold_;
  bool reordering_ = false;
};

}  // namespace sgrk::dd
