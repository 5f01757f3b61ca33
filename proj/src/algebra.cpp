#include "incept/algebra.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace incept {

int FiniteLEAlgebra::apply(const std::string& conn,
                           const std::vector<int>& args) const {
  auto it = ops.find(conn);
  if (it == ops.end()) throw std::runtime_error("no table for " + conn);
  size_t ix = 0;
  for (int a : args) ix = ix * size + a;
  return it->second[ix];
}

int evaluate(const Formula& f, const FiniteLEAlgebra& alg, const Valuation& val) {
  switch (f.kind) {
    case Formula::Kind::Atom: {
      auto it = val.find(f.name);
      if (it == val.end()) throw std::runtime_error("unmapped atom " + f.name);
      return it->second;
    }
    case Formula::Kind::Top:
      return alg.top;
    case Formula::Kind::Bot:
      return alg.bot;
    case Formula::Kind::And:
      return alg.meet(evaluate(f.args[0], alg, val), evaluate(f.args[1], alg, val));
    case Formula::Kind::Or:
      return alg.join(evaluate(f.args[0], alg, val), evaluate(f.args[1], alg, val));
    case Formula::Kind::Conn: {
      std::vector<int> args;
      args.reserve(f.args.size());
      for (const auto& a : f.args) args.push_back(evaluate(a, alg, val));
      return alg.apply(f.name, args);
    }
  }
  return alg.bot;
}

namespace {

bool forAll(const std::vector<std::string>& vars, size_t i, Valuation& val,
            const FiniteLEAlgebra& alg, const std::function<bool()>& body) {
  if (i == vars.size()) return body();
  for (int e = 0; e < alg.size; ++e) {
    val[vars[i]] = e;
    if (!forAll(vars, i + 1, val, alg, body)) {
      val.erase(vars[i]);
      return false;
    }
  }
  val.erase(vars[i]);
  return true;
}

}  // namespace

bool axiom_valid(const Inequality& iq, const FiniteLEAlgebra& alg) {
  std::vector<std::string> vars = variables(iq, VarKind::Prop);
  Valuation val;
  return forAll(vars, 0, val, alg, [&] {
    return alg.leq(evaluate(iq.lhs, alg, val), evaluate(iq.rhs, alg, val));
  });
}

unsigned long long valuation_count(const Inequality& iq,
                                   const FiniteLEAlgebra& alg) {
  unsigned long long n = 1;
  for (size_t i = 0; i < variables(iq, VarKind::Prop).size(); ++i) {
    n *= (unsigned long long)alg.size;
    if (n > 100000000ull) return n;
  }
  return n;
}

bool clause_valid(const Clause& c, const FiniteLEAlgebra& alg, Valuation& val) {
  std::vector<std::string> vars = c.propVars;
  vars.insert(vars.end(), c.nomVars.begin(), c.nomVars.end());
  vars.insert(vars.end(), c.conomVars.begin(), c.conomVars.end());
  return forAll(vars, 0, val, alg, [&] {
    for (const auto& a : c.ante) {
      bool holds = a.isClause
                       ? clause_valid(a.clause(), alg, val)
                       : alg.leq(evaluate(a.ineq.lhs, alg, val),
                                 evaluate(a.ineq.rhs, alg, val));
      if (!holds) return true;  // antecedent fails, implication holds
    }
    return alg.leq(evaluate(c.conseq.lhs, alg, val),
                   evaluate(c.conseq.rhs, alg, val));
  });
}

bool clause_valid(const Clause& c, const FiniteLEAlgebra& alg) {
  Valuation val;
  return clause_valid(c, alg, val);
}

std::vector<Diagnostic> validate_algebra(const FiniteLEAlgebra& alg,
                                         const Signature& sig) {
  std::vector<Diagnostic> diags;
  auto bad = [&](const std::string& p, const std::string& m) {
    diags.push_back({p, m});
  };
  const int n = alg.size;
  if (n <= 0) {
    bad("size", "empty carrier");
    return diags;
  }

  // partial order
  for (int a = 0; a < n; ++a) {
    if (!alg.leq(a, a)) bad("leq", "not reflexive");
    for (int b = 0; b < n; ++b) {
      if (a != b && alg.leq(a, b) && alg.leq(b, a)) bad("leq", "not antisymmetric");
      for (int c = 0; c < n; ++c)
        if (alg.leq(a, b) && alg.leq(b, c) && !alg.leq(a, c))
          bad("leq", "not transitive");
    }
  }
  if (!diags.empty()) return diags;

  // lattice structure against the tables
  for (int a = 0; a < n; ++a) {
    if (!alg.leq(alg.bot, a) || !alg.leq(a, alg.top)) bad("bounds", "top/bot wrong");
    for (int b = 0; b < n; ++b) {
      int j = alg.join(a, b), m = alg.meet(a, b);
      if (!alg.leq(a, j) || !alg.leq(b, j)) bad("join", "not an upper bound");
      if (!alg.leq(m, a) || !alg.leq(m, b)) bad("meet", "not a lower bound");
      for (int c = 0; c < n; ++c) {
        if (alg.leq(a, c) && alg.leq(b, c) && !alg.leq(j, c))
          bad("join", "not least");
        if (alg.leq(c, a) && alg.leq(c, b) && !alg.leq(c, m))
          bad("meet", "not greatest");
      }
    }
  }
  if (!diags.empty()) return diags;

  auto tuples = [&](int arity) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(arity, 0);
    for (;;) {
      out.push_back(cur);
      int i = arity - 1;
      while (i >= 0 && ++cur[i] == n) cur[i--] = 0;
      if (i < 0) break;
    }
    if (arity == 0) out.assign(1, {});
    return out;
  };

  for (const auto& c : sig.connectives) {
    auto it = alg.ops.find(c.name);
    if (it == alg.ops.end()) {
      bad(c.name, "missing table");
      continue;
    }
    size_t want = 1;
    for (int i = 0; i < c.arity; ++i) want *= n;
    if (it->second.size() != want) {
      bad(c.name, "table size mismatch");
      continue;
    }
    // operator + normality laws, coordinatewise
    for (int i = 0; i < c.arity; ++i) {
      Tone e = c.orderType[i];
      for (auto t : tuples(c.arity)) {
        for (int x = 0; x < n; ++x)
          for (int y = 0; y < n; ++y) {
            auto tx = t, ty = t, txy = t;
            tx[i] = x;
            ty[i] = y;
            txy[i] = e == Tone::Pos ? alg.join(x, y) : alg.meet(x, y);
            int lhs = alg.apply(c.name, txy);
            int l = alg.apply(c.name, tx), r = alg.apply(c.name, ty);
            int rhs = c.family == Family::F ? alg.join(l, r) : alg.meet(l, r);
            if (lhs != rhs) {
              bad(c.name, "operator law fails at coordinate " + std::to_string(i + 1));
              x = y = n;  // stop this coordinate
            }
          }
        auto tb = t;
        tb[i] = c.family == Family::F
                    ? (e == Tone::Pos ? alg.bot : alg.top)
                    : (e == Tone::Pos ? alg.top : alg.bot);
        int v = alg.apply(c.name, tb);
        if (c.family == Family::F ? v != alg.bot : v != alg.top) {
          bad(c.name, "normality fails at coordinate " + std::to_string(i + 1));
          break;
        }
      }
    }
    // residuation law of every link
    for (int i = 0; i < c.arity; ++i) {
      if ((int)c.residuals.size() <= i || c.residuals[i].conn.empty()) continue;
      const ResidualLink& link = c.residuals[i];
      if (!alg.ops.count(link.conn)) {
        bad(c.name, "missing residual table " + link.conn);
        continue;
      }
      bool okAll = true;
      for (auto t : tuples(c.arity)) {
        for (int b = 0; b < n && okAll; ++b) {
          // abstract residual args: t with coordinate i replaced by b
          auto rargs = t;
          rargs[i] = b;
          std::vector<int> targs(c.arity);
          for (int q = 0; q < c.arity; ++q) targs[q] = rargs[link.argOf[q]];
          int rv = alg.apply(link.conn, targs);
          for (int x = 0; x < n && okAll; ++x) {
            auto tx = t;
            tx[i] = x;
            int hv = alg.apply(c.name, tx);
            bool lhsHolds, rhsHolds;
            if (c.family == Family::F) {
              lhsHolds = alg.leq(hv, b);
              rhsHolds = c.orderType[i] == Tone::Pos ? alg.leq(x, rv)
                                                     : alg.leq(rv, x);
            } else {
              lhsHolds = alg.leq(b, hv);
              rhsHolds = c.orderType[i] == Tone::Pos ? alg.leq(rv, x)
                                                     : alg.leq(x, rv);
            }
            if (lhsHolds != rhsHolds) {
              bad(c.name, "residuation law fails at coordinate " +
                              std::to_string(i + 1));
              okAll = false;
            }
          }
        }
        if (!okAll) break;
      }
    }
  }
  return diags;
}

AlgebraStream::AlgebraStream(const Signature& sig, int maxSize, uint64_t seed)
    : sig_(sig), maxSize_(maxSize), state_(seed * 6364136223846793005ull + 1442695040888963407ull) {}

uint64_t AlgebraStream::rnd(uint64_t bound) {
  // splitmix64 step; plenty for test-data generation and fully portable
  state_ += 0x9e3779b97f4a7c15ull;
  uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z = z ^ (z >> 31);
  return bound ? z % bound : 0;
}

FiniteLEAlgebra AlgebraStream::next() {
  for (;;) {
    // intersection-closed family of subsets of a small universe
    int universe = 1 + (int)rnd(3);
    uint32_t full = (1u << universe) - 1;
    std::set<uint32_t> family{full};
    int extra = 1 + (int)rnd(4);
    for (int i = 0; i < extra; ++i) family.insert((uint32_t)rnd(full + 1));
    bool grew = true;
    while (grew) {
      grew = false;
      for (uint32_t a : std::set<uint32_t>(family))
        for (uint32_t b : std::set<uint32_t>(family))
          if (family.insert(a & b).second) grew = true;
    }
    if ((int)family.size() > maxSize_ || family.size() < 2) continue;

    FiniteLEAlgebra alg;
    std::vector<uint32_t> elems(family.begin(), family.end());
    std::sort(elems.begin(), elems.end(), [](uint32_t a, uint32_t b) {
      int ca = __builtin_popcount(a), cb = __builtin_popcount(b);
      return ca != cb ? ca < cb : a < b;
    });
    int n = (int)elems.size();
    alg.size = n;
    alg.leqTab.assign(n * n, 0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        alg.leqTab[a * n + b] = (elems[a] & ~elems[b]) == 0;
    alg.joinTab.assign(n * n, 0);
    alg.meetTab.assign(n * n, 0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        uint32_t m = elems[a] & elems[b];
        alg.meetTab[a * n + b] =
            (int)(std::find(elems.begin(), elems.end(), m) - elems.begin());
        // least member of the family above both
        uint32_t j = full;
        for (uint32_t e : elems)
          if ((elems[a] & ~e) == 0 && (elems[b] & ~e) == 0 && ((e & ~j) == 0))
            j = e;
        alg.joinTab[a * n + b] =
            (int)(std::find(elems.begin(), elems.end(), j) - elems.begin());
      }
    alg.bot = 0;
    alg.top = n - 1;

    // irreducibles
    std::vector<int> joinIrr, meetIrr;
    for (int x = 0; x < n; ++x) {
      int below = alg.bot, above = alg.top;
      for (int y = 0; y < n; ++y) {
        if (y != x && alg.leq(y, x)) below = alg.join(below, y);
        if (y != x && alg.leq(x, y)) above = alg.meet(above, y);
      }
      if (below != x) joinIrr.push_back(x);
      if (above != x) meetIrr.push_back(x);
    }

    auto tuples = [&](const std::vector<std::vector<int>>& doms) {
      std::vector<std::vector<int>> out;
      std::vector<size_t> ix(doms.size(), 0);
      for (;;) {
        std::vector<int> t;
        for (size_t i = 0; i < doms.size(); ++i) t.push_back(doms[i][ix[i]]);
        out.push_back(t);
        int i = (int)doms.size() - 1;
        while (i >= 0 && ++ix[i] == doms[i].size()) ix[i--] = 0;
        if (i < 0) break;
      }
      if (doms.empty()) out.assign(1, {});
      return out;
    };

    for (const auto& c : sig_.connectives) {
      if (!c.isPrimitive()) continue;
      std::vector<std::vector<int>> gens(c.arity);
      for (int i = 0; i < c.arity; ++i)
        gens[i] = c.orderType[i] == Tone::Pos ? joinIrr : meetIrr;
      std::vector<std::pair<std::vector<int>, int>> seedVals;
      for (const auto& t : tuples(gens))
        seedVals.push_back({t, (int)rnd(n)});

      std::vector<std::vector<int>> allDoms(c.arity);
      for (int i = 0; i < c.arity; ++i) {
        allDoms[i].resize(n);
        for (int x = 0; x < n; ++x) allDoms[i][x] = x;
      }
      std::vector<int>& table = alg.ops[c.name];
      for (const auto& t : tuples(allDoms)) {
        int acc = c.family == Family::F ? alg.bot : alg.top;
        for (const auto& [g, v] : seedVals) {
          bool dominates = true;
          for (int i = 0; i < c.arity && dominates; ++i) {
            bool le = c.orderType[i] == Tone::Pos ? alg.leq(g[i], t[i])
                                                  : alg.leq(t[i], g[i]);
            dominates = le;
          }
          if (dominates)
            acc = c.family == Family::F ? alg.join(acc, v) : alg.meet(acc, v);
        }
        table.push_back(acc);
      }
    }

    // residual tables as genuine residuals of the primitive tables
    for (const auto& c : sig_.connectives) {
      if (!c.isPrimitive()) continue;
      for (int i = 0; i < c.arity; ++i) {
        const ResidualLink& link = c.residuals[i];
        if (link.conn.empty() || alg.ops.count(link.conn)) continue;
        const ConnectiveSpec& r = sig_.at(link.conn);
        std::vector<std::vector<int>> doms(r.arity);
        for (int q = 0; q < r.arity; ++q) {
          doms[q].resize(n);
          for (int x = 0; x < n; ++x) doms[q][x] = x;
        }
        std::vector<int>& table = alg.ops[r.name];
        for (const auto& targs : tuples(doms)) {
          // abstract residual args: rargs[p] for p != i are the parent args,
          // rargs[i] is the bound
          std::vector<int> rargs(c.arity);
          for (int q = 0; q < c.arity; ++q) rargs[link.argOf[q]] = targs[q];
          int b = rargs[i];
          bool wantMax = (c.family == Family::F) == (c.orderType[i] == Tone::Pos);
          int acc = wantMax ? alg.bot : alg.top;
          for (int x = 0; x < n; ++x) {
            auto h = rargs;
            h[i] = x;
            int hv = alg.apply(c.name, std::vector<int>(h.begin(), h.end()));
            bool holds = c.family == Family::F ? alg.leq(hv, b) : alg.leq(b, hv);
            if (holds) acc = wantMax ? alg.join(acc, x) : alg.meet(acc, x);
          }
          table.push_back(acc);
        }
      }
    }

    if (!validate_algebra(alg, sig_).empty()) continue;
    return alg;
  }
}

std::vector<FiniteLEAlgebra> enumerate_algebras(const Signature& sig, int maxSize,
                                                uint64_t seed, int count) {
  AlgebraStream st(sig, maxSize, seed);
  std::vector<FiniteLEAlgebra> out;
  for (int i = 0; i < count; ++i) out.push_back(st.next());
  return out;
}

std::string algebra_to_json(const FiniteLEAlgebra& alg) {
  nlohmann::ordered_json j;
  j["size"] = alg.size;
  std::string bits;
  for (uint8_t b : alg.leqTab) bits += b ? '1' : '0';
  j["leq"] = bits;
  nlohmann::ordered_json ops;
  for (const auto& [name, tab] : alg.ops) ops[name] = tab;
  j["ops"] = ops;
  return j.dump(2) + "\n";
}

FiniteLEAlgebra algebra_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  FiniteLEAlgebra alg;
  alg.size = j.at("size").get<int>();
  std::string bits = j.at("leq").get<std::string>();
  if ((int)bits.size() != alg.size * alg.size)
    throw std::runtime_error("leq table size mismatch");
  for (char c : bits) alg.leqTab.push_back(c == '1');
  const int n = alg.size;
  alg.joinTab.assign(n * n, -1);
  alg.meetTab.assign(n * n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        if (alg.leq(a, c) && alg.leq(b, c) &&
            (alg.joinTab[a * n + b] < 0 || alg.leq(c, alg.joinTab[a * n + b])))
          alg.joinTab[a * n + b] = c;
        if (alg.leq(c, a) && alg.leq(c, b) &&
            (alg.meetTab[a * n + b] < 0 || alg.leq(alg.meetTab[a * n + b], c)))
          alg.meetTab[a * n + b] = c;
      }
      if (alg.joinTab[a * n + b] < 0 || alg.meetTab[a * n + b] < 0)
        throw std::runtime_error("leq is not a lattice");
    }
  alg.top = 0;
  alg.bot = 0;
  for (int a = 0; a < n; ++a) {
    if (alg.leq(alg.top, a)) alg.top = a;
    if (alg.leq(a, alg.bot)) alg.bot = a;
  }
  for (auto it = j.at("ops").begin(); it != j.at("ops").end(); ++it)
    alg.ops[it.key()] = it.value().get<std::vector<int>>();
  return alg;
}

}  // namespace incept
