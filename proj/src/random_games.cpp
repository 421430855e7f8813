#include "sgrk/random_games.hpp"

#include <algorithm>

#include "sgrk/oracle.hpp"

namespace sgrk {

namespace {

using Rng = std::mt19937_64;

std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) { return lo + rng() % (hi - lo + 1); }
double unit(Rng& rng) { return static_cast<double>(rng() >> 11) / static_cast<double>(std::uint64_t{1} << 53); }

// A variable position in a packed relation index: bit `bit` of the index.
struct Slot {
  std::string name;
  bool primed;
  std::size_t bit;
};

struct Cube {
  std::uint64_t mask = 0, value = 0;
};

ExprPtr cube_expr(const std::vector<Slot>& slots, const Cube& c) {
  std::vector<ExprPtr> lits;
  for (const Slot& s : slots) {
    std::uint64_t b = std::uint64_t{1} << s.bit;
    if (c.mask & b) lits.push_back(mk_lit(s.name, (c.value & b) != 0, s.primed));
  }
  return mk_and(std::move(lits));
}

Cube random_cube(Rng& rng, std::size_t width, std::size_t max_literals) {
  Cube c;
  std::size_t k = uniform(rng, 1, std::max<std::size_t>(1, std::min(width, max_literals)));
  std::vector<std::size_t> pos(width);
  for (std::size_t p = 0; p < width; ++p) pos[p] = p;
  for (std::size_t p = 0; p < k && p < width; ++p) {
    std::swap(pos[p], pos[p + rng() % (width - p)]);
    c.mask |= std::uint64_t{1} << pos[p];
    if (rng() & 1) c.value |= std::uint64_t{1} << pos[p];
  }
  return c;
}

// Random relation over `width` packed bits: cubes are added until the
// fraction of covered points reaches a target drawn from [0.2, 0.8].
std::vector<Cube> random_relation(Rng& rng, std::size_t width, std::vector<bool>& covered) {
  const std::uint64_t points = std::uint64_t{1} << width;
  covered.assign(points, false);
  double target = 0.2 + 0.6 * unit(rng);
  std::uint64_t count = 0;
  std::vector<Cube> cubes;
  while (cubes.size() < 64 && static_cast<double>(count) < target * static_cast<double>(points)) {
    Cube c = random_cube(rng, width, 5);
    cubes.push_back(c);
    std::uint64_t free = (points - 1) & ~c.mask;
    for (std::uint64_t sub = free;; sub = (sub - 1) & free) {
      std::uint64_t p = c.value | sub;
      if (!covered[p]) {
        covered[p] = true;
        ++count;
      }
      if (sub == 0) break;
    }
  }
  return cubes;
}

std::vector<std::string> names(const char* prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

// Slots for a relation over cur (high bits) and next (low bits) copies of `vars`:
// the packed index is (cur << n) | next, first variable most significant.
std::vector<Slot> component_slots(const std::vector<std::string>& vars) {
  const std::size_t n = vars.size();
  std::vector<Slot> slots;
  for (std::size_t k = 0; k < n; ++k) slots.push_back({vars[k], false, 2 * n - 1 - k});
  for (std::size_t k = 0; k < n; ++k) slots.push_back({vars[k], true, n - 1 - k});
  return slots;
}

// Random component transition relation with deadlocks repaired by self-loops.
ExprPtr random_component(Rng& rng, const std::vector<std::string>& vars) {
  const std::size_t n = vars.size();
  if (n == 0) return mk_const(true);
  std::vector<bool> covered;
  std::vector<Cube> cubes = random_relation(rng, 2 * n, covered);
  auto slots = component_slots(vars);
  std::vector<ExprPtr> disj;
  for (const Cube& c : cubes) disj.push_back(cube_expr(slots, c));
  const std::uint64_t states = std::uint64_t{1} << n;
  for (std::uint64_t x = 0; x < states; ++x) {
    bool any = false;
    for (std::uint64_t y = 0; y < states && !any; ++y) any = covered[(x << n) | y];
    if (!any) disj.push_back(mk_and({minterm(vars, x), minterm(vars, x, true)}));
  }
  return mk_or(std::move(disj));
}

ExprPtr random_state_cube(Rng& rng, const std::vector<std::string>& vars, std::size_t max_literals) {
  if (vars.empty()) return mk_const(true);
  std::vector<Slot> slots;
  for (std::size_t k = 0; k < vars.size(); ++k) slots.push_back({vars[k], false, vars.size() - 1 - k});
  return cube_expr(slots, random_cube(rng, vars.size(), max_literals));
}

}  // namespace

ExprPtr minterm(const std::vector<std::string>& vars, std::uint64_t bits, bool primed) {
  std::vector<ExprPtr> lits;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    lits.push_back(mk_lit(vars[k], (bits >> (vars.size() - 1 - k)) & 1, primed));
  }
  return mk_and(std::move(lits));
}

SpecModel random_separated_grk(std::uint64_t seed, const RandomGameParams& params) {
  Rng rng(seed);
  std::size_t total = uniform(rng, std::max<std::size_t>(2, params.min_vars), params.max_vars);
  std::size_t n_in = uniform(rng, 1, total - 1);
  SpecModel spec;
  spec.inputs = names("i", n_in);
  spec.outputs = names("o", total - n_in);
  spec.init_env = random_state_cube(rng, spec.inputs, 2);
  spec.init_sys = random_state_cube(rng, spec.outputs, 2);
  spec.trans_env = random_component(rng, spec.inputs);
  spec.trans_sys = random_component(rng, spec.outputs);
  std::size_t k = uniform(rng, 0, 3);
  for (std::size_t l = 0; l < k; ++l) {
    GrkConjunct c;
    std::size_t nl = uniform(rng, 0, 2), ml = uniform(rng, 0, 2);
    for (std::size_t i = 0; i < nl; ++i) c.assumptions.push_back(random_state_cube(rng, spec.inputs, 3));
    for (std::size_t j = 0; j < ml; ++j) c.guarantees.push_back(random_state_cube(rng, spec.outputs, 3));
    spec.conjuncts.push_back(std::move(c));
  }
  return spec;
}

RandomWeakBuchi random_weak_buchi(std::uint64_t seed, bool separated, const RandomGameParams& params) {
  Rng rng(seed ^ 0x5eedb00c5eedb00cULL);
  RandomWeakBuchi out;
  out.separated = separated;
  SpecModel& spec = out.spec;
  std::size_t max_vars = separated ? params.max_vars : std::min<std::size_t>(params.max_vars, 6);
  std::size_t total = uniform(rng, std::max<std::size_t>(2, params.min_vars), max_vars);
  std::size_t n_in = uniform(rng, 1, total - 1);
  spec.inputs = names("i", n_in);
  spec.outputs = names("o", total - n_in);
  if (separated) {
    spec.init_env = random_state_cube(rng, spec.inputs, 2);
    spec.init_sys = random_state_cube(rng, spec.outputs, 2);
    spec.trans_env = random_component(rng, spec.inputs);
    spec.trans_sys = random_component(rng, spec.outputs);
  } else {
    // Relations read the whole current state. Packed indices:
    // env: (state << n_in) | i',  sys: (state << (n_in + n_out)) | (i' << n_out) | o'.
    const std::size_t n_out = spec.outputs.size();
    std::vector<std::string> all = spec.inputs;
    all.insert(all.end(), spec.outputs.begin(), spec.outputs.end());
    std::vector<Slot> env_slots, sys_slots;
    for (std::size_t k = 0; k < total; ++k) {
      env_slots.push_back({all[k], false, n_in + total - 1 - k});
      sys_slots.push_back({all[k], false, total + total - 1 - k});
    }
    for (std::size_t k = 0; k < n_in; ++k) {
      env_slots.push_back({spec.inputs[k], true, n_in - 1 - k});
      sys_slots.push_back({spec.inputs[k], true, n_out + n_in - 1 - k});
    }
    for (std::size_t k = 0; k < n_out; ++k) sys_slots.push_back({spec.outputs[k], true, n_out - 1 - k});

    std::vector<bool> env_cov, sys_cov;
    std::vector<Cube> env_cubes = random_relation(rng, total + n_in, env_cov);
    std::vector<Cube> sys_cubes = random_relation(rng, 2 * total, sys_cov);
    std::vector<ExprPtr> env, sys;
    for (const Cube& c : env_cubes) env.push_back(cube_expr(env_slots, c));
    for (const Cube& c : sys_cubes) sys.push_back(cube_expr(sys_slots, c));
    const std::uint64_t states = std::uint64_t{1} << total;
    const std::uint64_t ni = std::uint64_t{1} << n_in, no = std::uint64_t{1} << n_out;
    for (std::uint64_t s = 0; s < states; ++s) {
      std::uint64_t i = s >> n_out, o = s & (no - 1);
      bool any_env = false;
      for (std::uint64_t j = 0; j < ni; ++j) any_env = any_env || env_cov[(s << n_in) | j];
      if (!any_env) {
        env.push_back(mk_and({minterm(all, s), minterm(spec.inputs, i, true)}));
        env_cov[(s << n_in) | i] = true;
      }
      for (std::uint64_t j = 0; j < ni; ++j) {
        if (!env_cov[(s << n_in) | j]) continue;
        bool any_sys = false;
        for (std::uint64_t p = 0; p < no; ++p) any_sys = any_sys || sys_cov[(s << total) | (j << n_out) | p];
        if (!any_sys) {
          sys.push_back(mk_and({minterm(all, s), minterm(spec.inputs, j, true), minterm(spec.outputs, o, true)}));
        }
      }
    }
    spec.init_env = random_state_cube(rng, spec.inputs, 2);
    spec.init_sys = random_state_cube(rng, all, 2);
    spec.trans_env = mk_or(std::move(env));
    spec.trans_sys = mk_or(std::move(sys));
  }

  ExplicitGame g = enumerate_game(spec, std::size_t{1} << 20);
  double p = unit(rng);
  std::vector<bool> pick(g.scc_count());
  for (std::size_t c = 0; c < g.scc_count(); ++c) pick[c] = unit(rng) < p;
  std::vector<std::string> all = spec.inputs;
  all.insert(all.end(), spec.outputs.begin(), spec.outputs.end());
  std::vector<ExprPtr> terms;
  for (std::uint32_t s = 0; s < g.num_states; ++s) {
    if (pick[g.scc_id[s]]) terms.push_back(minterm(all, s));
  }
  out.acc = mk_or(std::move(terms));
  return out;
}

}  // namespace sgrk
