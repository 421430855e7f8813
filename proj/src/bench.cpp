#include "sgrk/bench.hpp"

#include "sgrk/error.hpp"

namespace sgrk {

namespace {

std::vector<std::string> indexed(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(prefix + std::to_string(k + 1));
  return out;
}

// bits[0] is the most significant bit.
ExprPtr equals(const std::vector<std::string>& bits, std::size_t value, bool primed = false) {
  std::vector<ExprPtr> lits;
  for (std::size_t k = 0; k < bits.size(); ++k) {
    lits.push_back(mk_lit(bits[k], (value >> (bits.size() - 1 - k)) & 1, primed));
  }
  return mk_and(std::move(lits));
}

ExprPtr exactly_one(const std::vector<std::string>& vars, bool primed = false) {
  std::vector<ExprPtr> options;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    std::vector<ExprPtr> lits;
    for (std::size_t j = 0; j < vars.size(); ++j) lits.push_back(mk_lit(vars[j], j == k, primed));
    options.push_back(mk_and(std::move(lits)));
  }
  return mk_or(std::move(options));
}

ExprPtr at_most_one(const std::vector<std::string>& vars, bool primed) {
  std::vector<ExprPtr> out;
  for (std::size_t a = 0; a < vars.size(); ++a) {
    for (std::size_t b = a + 1; b < vars.size(); ++b) {
      out.push_back(mk_not(mk_and({mk_var(vars[a], primed), mk_var(vars[b], primed)})));
    }
  }
  return mk_and(std::move(out));
}

}  // namespace

std::size_t ceil_log2(std::size_t m) {
  std::size_t b = 0;
  while ((std::size_t{1} << b) < m) ++b;
  return b;
}

SpecModel gen_multimode(std::size_t n) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "multimode needs n >= 1");
  if (n > 16) throw Error(ErrorKind::invalid_argument, "multimode supports n <= 16");
  SpecModel s;
  for (std::size_t k = n; k-- > 0;) s.inputs.push_back("t" + std::to_string(k));
  for (std::size_t k = n; k-- > 0;) s.outputs.push_back("a" + std::to_string(k));
  const std::vector<std::string>& t = s.inputs;
  const std::vector<std::string>& a = s.outputs;
  s.init_env = equals(t, 0);
  s.init_sys = equals(a, 0);

  // Target: from mode 0 to any other mode, then stay.
  std::vector<ExprPtr> same_t;
  for (const auto& v : t) same_t.push_back(mk_iff(mk_var(v), mk_var(v, true)));
  s.trans_env = mk_and({mk_implies(equals(t, 0), mk_not(equals(t, 0, true))),
                        mk_implies(mk_not(equals(t, 0)), mk_and(std::move(same_t)))});

  // Adaptee: from mode 0 to an odd mode, and between 2i and 2i+1.
  const std::string& low = a.back();
  std::vector<ExprPtr> same_high;
  for (std::size_t k = 0; k + 1 < a.size(); ++k) same_high.push_back(mk_iff(mk_var(a[k]), mk_var(a[k], true)));
  same_high.push_back(mk_iff(mk_var(low, true), mk_not(mk_var(low))));
  s.trans_sys = mk_and({mk_implies(equals(a, 0), mk_var(low, true)),
                        mk_implies(mk_not(equals(a, 0)), mk_and(std::move(same_high)))});

  for (std::size_t v = 0; v < (std::size_t{1} << n); ++v) {
    s.conjuncts.push_back({{equals(t, v)}, {equals(a, v)}});
  }
  return s;
}

SpecModel gen_cleaning(std::size_t n) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "cleaning needs n >= 1");
  SpecModel s;
  auto ip = indexed("in:pos_", n), ic = indexed("in:clean_", n);
  auto op = indexed("out:pos_", n), oc = indexed("out:clean_", n);
  for (std::size_t k = 0; k < n; ++k) {
    s.inputs.push_back(ip[k]);
    s.inputs.push_back(ic[k]);
  }
  s.inputs.push_back("done");
  for (std::size_t k = 0; k < n; ++k) {
    s.outputs.push_back(op[k]);
    s.outputs.push_back(oc[k]);
  }

  auto start = [&](const std::vector<std::string>& pos, const std::vector<std::string>& clean) {
    std::vector<ExprPtr> lits;
    for (std::size_t k = 0; k < n; ++k) {
      lits.push_back(mk_lit(pos[k], k == 0));
      lits.push_back(mk_lit(clean[k], false));
    }
    return lits;
  };
  auto init_env = start(ip, ic);
  init_env.push_back(mk_lit("done", false));
  s.init_env = mk_and(std::move(init_env));
  s.init_sys = mk_and(start(op, oc));

  // The robot stays or advances by one room, and stays once at the last room.
  auto movement = [&](const std::vector<std::string>& pos) {
    std::vector<ExprPtr> c{exactly_one(pos, true)};
    for (std::size_t k = 0; k < n; ++k) {
      ExprPtr next = k + 1 < n ? mk_or({mk_var(pos[k], true), mk_var(pos[k + 1], true)}) : mk_var(pos[k], true);
      c.push_back(mk_implies(mk_var(pos[k]), next));
    }
    return c;
  };

  std::vector<ExprPtr> env = movement(ip);
  for (std::size_t k = 0; k < n; ++k) {
    env.push_back(mk_implies(mk_var(ic[k]), mk_var(ic[k], true)));
    env.push_back(mk_implies(mk_var(ic[k], true),
                             mk_or({mk_var(ic[k]), mk_and({mk_var(ip[k]), mk_not(mk_var("done"))})})));
  }
  env.push_back(mk_iff(mk_var("done", true), mk_var(ip.back())));
  s.trans_env = mk_implies(exactly_one(ip), mk_and(std::move(env)));

  std::vector<ExprPtr> sys = movement(op);
  for (std::size_t k = 0; k < n; ++k) {
    sys.push_back(mk_implies(mk_var(oc[k]), mk_var(oc[k], true)));
    sys.push_back(mk_implies(mk_var(oc[k], true), mk_or({mk_var(oc[k]), mk_var(op[k])})));
  }
  s.trans_sys = mk_implies(exactly_one(op), mk_and(std::move(sys)));

  for (std::size_t k = 0; k < n; ++k) {
    s.conjuncts.push_back({{mk_var("done"), mk_not(mk_var(ic[k]))}, {mk_var(oc[k])}});
    s.conjuncts.push_back({{mk_var("done"), mk_var(ic[k])}, {mk_not(mk_var(oc[k]))}});
  }
  return s;
}

SpecModel gen_railways(std::size_t n, std::size_t m) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "railways needs n >= 2");
  if (m < 2) throw Error(ErrorKind::invalid_argument, "railways needs m >= 2");
  const std::size_t b = ceil_log2(m);
  SpecModel s;
  struct Side {
    std::vector<std::string> signal;
    std::vector<std::vector<std::string>> counter;
  } in, out;
  auto declare = [&](Side& side, const std::string& prefix, std::vector<std::string>& vars) {
    for (std::size_t i = 1; i <= n; ++i) {
      side.signal.push_back(prefix + ":signal_" + std::to_string(i));
      vars.push_back(side.signal.back());
      auto& c = side.counter.emplace_back();
      for (std::size_t k = b; k-- > 0;) {
        c.push_back(prefix + ":count_" + std::to_string(i) + "_" + std::to_string(k));
        vars.push_back(c.back());
      }
    }
  };
  declare(in, "in", s.inputs);
  declare(out, "out", s.outputs);

  // Steps since the signal was last on, saturating at m-1.
  auto counters = [&](const Side& side) {
    std::vector<ExprPtr> c;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& bits = side.counter[i];
      c.push_back(mk_implies(mk_var(side.signal[i], true), equals(bits, 0, true)));
      for (std::size_t v = 0; v < (std::size_t{1} << b); ++v) {
        std::size_t next = std::min(v + 1, m - 1);
        c.push_back(mk_implies(mk_and({equals(bits, v), mk_not(mk_var(side.signal[i], true))}),
                               equals(bits, next, true)));
      }
    }
    return c;
  };
  auto fresh = [&](const Side& side, std::size_t i) {
    std::vector<ExprPtr> vals;
    for (std::size_t v = 0; v + 1 < m; ++v) vals.push_back(equals(side.counter[i], v));
    return mk_or(std::move(vals));
  };
  auto initial = [&](const Side& side) {
    std::vector<ExprPtr> c;
    for (std::size_t i = 0; i < n; ++i) {
      c.push_back(mk_not(mk_var(side.signal[i])));
      c.push_back(equals(side.counter[i], m - 1));
    }
    return mk_and(std::move(c));
  };
  s.init_env = initial(in);
  s.init_sys = initial(out);

  std::vector<ExprPtr> env = counters(in);
  env.insert(env.begin(), at_most_one(in.signal, true));
  s.trans_env = mk_and(std::move(env));

  // Rails i and j (1-based) overlap when both lie in a window [2g+1, 2g+4].
  auto overlap = [](std::size_t i, std::size_t j) {
    if (i == j) return false;
    std::size_t lo = std::min(i, j), hi = std::max(i, j);
    for (std::size_t start = 1; start <= lo; start += 2) {
      if (lo >= start && hi <= start + 3) return true;
    }
    return false;
  };
  std::vector<ExprPtr> sys;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<ExprPtr> others;
    for (std::size_t j = 0; j < n; ++j) {
      if (overlap(i + 1, j + 1)) others.push_back(mk_not(mk_var(out.signal[j], true)));
    }
    sys.push_back(mk_iff(mk_var(out.signal[i], true), mk_and(std::move(others))));
  }
  auto oc = counters(out);
  sys.insert(sys.end(), oc.begin(), oc.end());
  s.trans_sys = mk_and(std::move(sys));

  for (std::size_t i = 0; i < n; ++i) {
    s.conjuncts.push_back({{mk_var(in.signal[i])}, {mk_var(out.signal[i])}});
    s.conjuncts.push_back({{fresh(in, i)}, {fresh(out, i)}});
  }
  return s;
}

SpecModel gen_family(const std::string& family, std::size_t n, std::size_t m) {
  if (family == "multimode") return gen_multimode(n);
  if (family == "cleaning") return gen_cleaning(n);
  if (family == "railways") return gen_railways(n, m);
  throw Error(ErrorKind::invalid_argument, "unknown benchmark family '" + family + "'");
}

std::size_t expected_var_count(const std::string& family, std::size_t n, std::size_t m) {
  if (family == "multimode") return 2 * n;
  if (family == "cleaning") return 4 * n + 1;
  if (family == "railways") return (2 + 2 * ceil_log2(m)) * n;
  throw Error(ErrorKind::invalid_argument, "unknown benchmark family '" + family + "'");
}

}  // namespace sgrk
