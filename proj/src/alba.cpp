#include "incept/alba.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace incept {

namespace {

bool isSafeConstantLeaf(const Formula& f, bool positive, const Signature& sig) {
  switch (f.kind) {
    case Formula::Kind::Top:
      return positive;
    case Formula::Kind::Bot:
      return !positive;
    case Formula::Kind::Conn: {
      const ConnectiveSpec& c = sig.at(f.name);
      if (c.arity != 0) return false;
      return c.family == Family::F ? positive : !positive;
    }
    default:
      return false;
  }
}

bool isSafeVarLeaf(const Formula& f, bool positive) {
  if (f.kind != Formula::Kind::Atom) return false;
  if (f.var == VarKind::Nom) return positive;
  if (f.var == VarKind::Conom) return !positive;
  return false;  // proposition letters are never safe in pure output
}

// SLR from this side, i.e. a definite Skeleton inner node.
bool isSLRHere(const Formula& f, bool positive, const Signature& sig) {
  if (f.kind != Formula::Kind::Conn || f.args.empty()) return false;
  const ConnectiveSpec& c = sig.at(f.name);
  return c.family == Family::F ? positive : !positive;
}

bool isDeltaHere(const Formula& f, bool positive) {
  return (f.kind == Formula::Kind::Or && positive) ||
         (f.kind == Formula::Kind::And && !positive);
}

bool childSign(const Formula& f, int i, bool positive, const Signature& sig) {
  if (f.kind == Formula::Kind::And || f.kind == Formula::Kind::Or)
    return positive;
  return sig.at(f.name).orderType[i] == Tone::Pos ? positive : !positive;
}

// Entirely definite-Skeleton with correctly polarized leaves?
bool sideSafe(const Formula& f, bool positive, const Signature& sig) {
  if (isSLRHere(f, positive, sig)) {
    for (size_t i = 0; i < f.args.size(); ++i)
      if (!sideSafe(f.args[i], childSign(f, (int)i, positive, sig), sig))
        return false;
    return true;
  }
  return isSafeVarLeaf(f, positive) || isSafeConstantLeaf(f, positive, sig);
}

struct CutCollector {
  AlbaState* st;
  const Signature* sig;
  bool cutSafeVars;  // unraveling cuts every variable at the region rim
  std::vector<std::string> newNoms, newConoms;
  std::vector<PureIneq> constraints;
  bool sawDelta = false;

  Formula cut(const Formula& t, bool positive) {
    if (positive) {
      std::string v = st->freshNom();
      newNoms.push_back(v);
      constraints.push_back({Formula::atom(v, VarKind::Nom), t});
      return Formula::atom(v, VarKind::Nom);
    }
    std::string v = st->freshConom();
    newConoms.push_back(v);
    constraints.push_back({t, Formula::atom(v, VarKind::Conom)});
    return Formula::atom(v, VarKind::Conom);
  }

  Formula walk(const Formula& f, bool positive) {
    if (isDeltaHere(f, positive)) {
      sawDelta = true;
      return f;  // caller splits the inequality instead
    }
    if (isSLRHere(f, positive, *sig)) {
      Formula out = f;
      for (size_t i = 0; i < f.args.size(); ++i)
        out.args[i] = walk(f.args[i], childSign(f, (int)i, positive, *sig));
      return out;
    }
    if (isSafeConstantLeaf(f, positive, *sig)) return f;
    if (isSafeVarLeaf(f, positive) && !cutSafeVars) return f;
    return cut(f, positive);
  }
};

// Splits lattice connectives at constraint roots and drops trivial bounds.
void rootSplit(const PureIneq& iq, std::vector<PureIneq>& out) {
  if (iq.rhs.kind == Formula::Kind::And) {
    rootSplit({iq.lhs, iq.rhs.args[0]}, out);
    rootSplit({iq.lhs, iq.rhs.args[1]}, out);
    return;
  }
  if (iq.lhs.kind == Formula::Kind::Or) {
    rootSplit({iq.lhs.args[0], iq.rhs}, out);
    rootSplit({iq.lhs.args[1], iq.rhs}, out);
    return;
  }
  if (iq.rhs.kind == Formula::Kind::Top || iq.lhs.kind == Formula::Kind::Bot)
    return;
  out.push_back(iq);
}

bool occurs(const Formula& f, const std::string& var) {
  if (f.kind == Formula::Kind::Atom) return f.name == var;
  for (const auto& a : f.args)
    if (occurs(a, var)) return true;
  return false;
}

int countOcc(const Formula& f, const std::string& var, bool positive,
             const Signature& sig, bool wantPositive) {
  if (f.kind == Formula::Kind::Atom) {
    if (f.name != var) return 0;
    return positive == wantPositive ? 1 : 0;
  }
  int total = 0;
  for (size_t i = 0; i < f.args.size(); ++i)
    total += countOcc(f.args[i], var, childSign(f, (int)i, positive, sig), sig,
                      wantPositive);
  return total;
}

Formula substVar(const Formula& f, const std::string& var, const Formula& by) {
  if (f.kind == Formula::Kind::Atom) return f.name == var ? by : f;
  Formula out = f;
  for (auto& a : out.args) a = substVar(a, var, by);
  return out;
}

void solveRec(PureIneq iq, const std::string& p, const Signature& sig,
              SolveResult& out) {
  bool inL = occurs(iq.lhs, p), inR = occurs(iq.rhs, p);
  if (inL && inR)
    throw std::runtime_error("variable " + p + " on both sides while solving");
  if (!inL && !inR) {
    std::vector<PureIneq> split;
    rootSplit(iq, split);
    for (auto& s : split) out.residues.push_back(std::move(s));
    return;
  }
  if (inR) {
    const Formula& r = iq.rhs;
    if (r.kind == Formula::Kind::Atom) {
      out.bounds.push_back(iq);  // lhs <= p, a lower bound
      return;
    }
    if (r.kind == Formula::Kind::And) {
      solveRec({iq.lhs, r.args[0]}, p, sig, out);
      solveRec({iq.lhs, r.args[1]}, p, sig, out);
      return;
    }
    if (r.kind != Formula::Kind::Conn)
      throw std::runtime_error("variable " + p + " not displayable");
    const ConnectiveSpec& c = sig.at(r.name);
    if (c.family == Family::F)
      throw std::runtime_error("variable " + p + " not displayable under " + r.name);
    int i = -1;
    for (size_t k = 0; k < r.args.size(); ++k)
      if (occurs(r.args[k], p)) {
        if (i >= 0) throw std::runtime_error("variable " + p + " not displayable");
        i = (int)k;
      }
    const ResidualLink& link = c.residuals[i];
    Formula target = r.args[i];
    std::vector<Formula> abstractArgs = r.args;
    abstractArgs[i] = iq.lhs;
    std::vector<Formula> linked(c.arity);
    for (int q = 0; q < c.arity; ++q) linked[q] = abstractArgs[link.argOf[q]];
    Formula res = Formula::conn(link.conn, std::move(linked));
    if (c.orderType[i] == Tone::Pos)
      solveRec({std::move(res), std::move(target)}, p, sig, out);
    else
      solveRec({std::move(target), std::move(res)}, p, sig, out);
    return;
  }
  const Formula& l = iq.lhs;
  if (l.kind == Formula::Kind::Atom) {
    out.bounds.push_back(iq);  // p <= rhs, an upper bound
    return;
  }
  if (l.kind == Formula::Kind::Or) {
    solveRec({l.args[0], iq.rhs}, p, sig, out);
    solveRec({l.args[1], iq.rhs}, p, sig, out);
    return;
  }
  if (l.kind != Formula::Kind::Conn)
    throw std::runtime_error("variable " + p + " not displayable");
  const ConnectiveSpec& c = sig.at(l.name);
  if (c.family == Family::G)
    throw std::runtime_error("variable " + p + " not displayable under " + l.name);
  int i = -1;
  for (size_t k = 0; k < l.args.size(); ++k)
    if (occurs(l.args[k], p)) {
      if (i >= 0) throw std::runtime_error("variable " + p + " not displayable");
      i = (int)k;
    }
  const ResidualLink& link = c.residuals[i];
  Formula target = l.args[i];
  std::vector<Formula> abstractArgs = l.args;
  abstractArgs[i] = iq.rhs;
  std::vector<Formula> linked(c.arity);
  for (int q = 0; q < c.arity; ++q) linked[q] = abstractArgs[link.argOf[q]];
  Formula res = Formula::conn(link.conn, std::move(linked));
  if (c.orderType[i] == Tone::Pos)
    solveRec({std::move(target), std::move(res)}, p, sig, out);
  else
    solveRec({std::move(res), std::move(target)}, p, sig, out);
}

std::string describeIneq(const PureIneq& iq) {
  return print_formula(iq.lhs) + " <= " + print_formula(iq.rhs);
}

// Outermost offending plain antecedent, if any.
std::pair<std::vector<Ante>*, size_t> findOffending(Clause& c, const Signature& sig) {
  std::vector<Clause*> queue{&c};
  for (size_t q = 0; q < queue.size(); ++q) {
    for (size_t i = 0; i < queue[q]->ante.size(); ++i) {
      Ante& a = queue[q]->ante[i];
      if (a.isClause) {
        queue.push_back(&a.clause());
        continue;
      }
      if (!sideSafe(a.ineq.lhs, true, sig) || !sideSafe(a.ineq.rhs, false, sig))
        return {&queue[q]->ante, i};
    }
  }
  return {nullptr, 0};
}

}  // namespace

AlbaState first_approximation(const Inequality& iq, const Certificate& cert,
                              const Signature& sig) {
  AlbaState st;
  st.epsilon = cert.epsilon;

  CutCollector cc{&st, &sig, /*cutSafeVars=*/true, {}, {}, {}, false};
  Formula goalL = cc.walk(iq.lhs, true);
  Formula goalR = cc.walk(iq.rhs, false);
  if (cc.sawDelta)
    throw std::runtime_error("first approximation requires a definite input");

  Clause c;
  c.propVars = variables(iq, VarKind::Prop);
  c.nomVars = cc.newNoms;
  c.conomVars = cc.newConoms;
  for (const auto& cons : cc.constraints) {
    std::vector<PureIneq> split;
    rootSplit(cons, split);
    for (auto& s : split) c.ante.push_back(Clause::plain(std::move(s)));
  }
  c.conseq = {std::move(goalL), std::move(goalR)};
  st.clause = std::move(c);
  st.trace.push_back({"first-approx", print_inequality(iq), st.clause});
  return st;
}

SolveResult solve_for_variable(const PureIneq& iq, const std::string& p,
                               const Signature& sig) {
  SolveResult out;
  solveRec(iq, p, sig, out);
  return out;
}

void ackermann_eliminate(AlbaState& st, const std::string& p, const Signature& sig) {
  Tone e = st.epsilon.at(p);
  Clause& c = st.clause;
  if (occurs(c.conseq.lhs, p) || occurs(c.conseq.rhs, p))
    throw std::runtime_error("eliminable variable occurs in the goal");

  // Solve the constraints carrying p in the polarity the rule eliminates,
  // rewriting them in place so every snapshot stays oracle-equivalent.
  std::vector<Ante> solved;
  for (auto& a : c.ante) {
    if (a.isClause) throw std::runtime_error("Ackermann stage expects a flat clause");
    const PureIneq iq = a.ineq;
    int pos = countOcc(iq.lhs, p, true, sig, true) +
              countOcc(iq.rhs, p, false, sig, true);
    int neg = countOcc(iq.lhs, p, true, sig, false) +
              countOcc(iq.rhs, p, false, sig, false);
    bool solveIt = e == Tone::Pos ? neg > 0 : pos > 0;
    bool keepIt = e == Tone::Pos ? pos > 0 : neg > 0;
    if (solveIt && keepIt)
      throw std::runtime_error("mixed polarity of " + p + " in " + describeIneq(iq));
    if (!solveIt) {
      solved.push_back(a);
      continue;
    }
    SolveResult sr = solve_for_variable(iq, p, sig);
    for (const auto& b : sr.bounds) solved.push_back(Clause::plain(b));
    for (const auto& r : sr.residues) solved.push_back(Clause::plain(r));
    c.ante = solved;  // partial view only used for the trace snapshot
    st.trace.push_back({"solve", p + " in " + describeIneq(iq), st.clause});
  }
  c.ante = solved;

  // Collect the bounds, substitute their join/meet, drop them.
  std::vector<Ante> rest;
  std::vector<Formula> bounds;
  for (auto& a : c.ante) {
    const PureIneq& iq = a.ineq;
    bool lowerBound = iq.rhs.kind == Formula::Kind::Atom && iq.rhs.name == p;
    bool upperBound = iq.lhs.kind == Formula::Kind::Atom && iq.lhs.name == p;
    if (e == Tone::Pos && lowerBound) {
      bounds.push_back(iq.lhs);
    } else if (e == Tone::Neg && upperBound) {
      bounds.push_back(iq.rhs);
    } else {
      rest.push_back(a);
    }
  }

  Formula value;
  if (bounds.empty()) {
    value = e == Tone::Pos ? Formula::bot() : Formula::top();
  } else {
    value = bounds[0];
    for (size_t i = 1; i < bounds.size(); ++i)
      value = e == Tone::Pos ? Formula::disj(value, bounds[i])
                             : Formula::conj(value, bounds[i]);
  }

  for (auto& a : rest) {
    // remaining occurrences must sit in the Ackermann-compatible polarity
    int bad = e == Tone::Pos
                  ? countOcc(a.ineq.lhs, p, true, sig, false) +
                        countOcc(a.ineq.rhs, p, false, sig, false)
                  : countOcc(a.ineq.lhs, p, true, sig, true) +
                        countOcc(a.ineq.rhs, p, false, sig, true);
    if (bad > 0)
      throw std::runtime_error("polarity violation for " + p + " in " +
                               describeIneq(a.ineq));
    a.ineq.lhs = substVar(a.ineq.lhs, p, value);
    a.ineq.rhs = substVar(a.ineq.rhs, p, value);
  }
  c.ante = std::move(rest);
  c.propVars.erase(std::remove(c.propVars.begin(), c.propVars.end(), p),
                   c.propVars.end());
  st.trace.push_back({"ackermann", p + " := " + print_formula(value), st.clause});
}

bool unravel_step(AlbaState& st, const Signature& sig) {
  auto [list, ix] = findOffending(st.clause, sig);
  if (!list) return false;
  const PureIneq iq = (*list)[ix].ineq;

  CutCollector cc{&st, &sig, /*cutSafeVars=*/true, {}, {}, {}, false};
  Formula nl = !sideSafe(iq.lhs, true, sig) ? cc.walk(iq.lhs, true) : iq.lhs;
  Formula nr = !sideSafe(iq.rhs, false, sig) ? cc.walk(iq.rhs, false) : iq.rhs;

  if (!cc.sawDelta) {
    Clause sub;
    sub.nomVars = cc.newNoms;
    sub.conomVars = cc.newConoms;
    for (auto& cons : cc.constraints) sub.ante.push_back(Clause::plain(cons));
    sub.conseq = {std::move(nl), std::move(nr)};
    (*list)[ix] = Clause::nested(std::move(sub));
    st.trace.push_back({"unravel", describeIneq(iq), st.clause});
    return true;
  }

  // a Delta-adjoint in the region: split the inequality in place instead
  std::function<bool(const Formula&, bool, std::vector<Formula>&)> splitSide =
      [&](const Formula& f, bool positive, std::vector<Formula>& outs) -> bool {
    if (isDeltaHere(f, positive)) {
      outs.push_back(f.args[0]);
      outs.push_back(f.args[1]);
      return true;
    }
    if (!isSLRHere(f, positive, sig)) return false;
    for (size_t i = 0; i < f.args.size(); ++i) {
      std::vector<Formula> sub;
      if (splitSide(f.args[i], childSign(f, (int)i, positive, sig), sub)) {
        for (auto& s : sub) {
          Formula copy = f;
          copy.args[i] = s;
          outs.push_back(copy);
        }
        return true;
      }
    }
    return false;
  };
  std::vector<Formula> ls, rs;
  std::vector<PureIneq> halves;
  if (splitSide(iq.lhs, true, ls)) {
    for (auto& l : ls) halves.push_back({l, iq.rhs});
  } else if (splitSide(iq.rhs, false, rs)) {
    for (auto& r : rs) halves.push_back({iq.lhs, r});
  } else {
    throw std::runtime_error("unravel: unsupported shape in " + describeIneq(iq));
  }
  list->erase(list->begin() + ix);
  for (size_t k = 0; k < halves.size(); ++k)
    list->insert(list->begin() + ix + k, Clause::plain(halves[k]));
  st.trace.push_back({"unravel", "split " + describeIneq(iq), st.clause});
  return true;
}

bool is_polarity_safe(const Clause& c, const Signature& sig) {
  auto ineqSafe = [&](const PureIneq& iq) {
    return sideSafe(iq.lhs, true, sig) && sideSafe(iq.rhs, false, sig);
  };
  if (!c.propVars.empty()) return false;
  for (const auto& a : c.ante) {
    if (a.isClause) {
      if (!is_polarity_safe(a.clause(), sig)) return false;
    } else if (!ineqSafe(a.ineq)) {
      return false;
    }
  }
  return ineqSafe(c.conseq);
}

AlbaRun run_alba(const Inequality& iq, const Signature& sig) {
  auto cert = find_inductive_certificate(iq, sig);
  if (!cert) throw std::runtime_error("inequality is not inductive");
  AlbaRun run;
  run.certificate = *cert;

  for (const Inequality& comp : split_definite(iq, sig)) {
    AlbaState st = first_approximation(comp, *cert, sig);

    // eliminate in an Omega-respecting order, first occurrence breaking ties
    std::vector<std::string> remaining = st.clause.propVars;
    while (!remaining.empty()) {
      std::string pick;
      for (const auto& v : remaining) {
        bool blocked = false;
        for (const auto& [a, b] : cert->omega)
          if (b == v && a != v &&
              std::find(remaining.begin(), remaining.end(), a) != remaining.end())
            blocked = true;
        if (!blocked) {
          pick = v;
          break;
        }
      }
      if (pick.empty()) throw std::runtime_error("dependency order has a cycle");
      ackermann_eliminate(st, pick, sig);
      st.elimOrder.push_back(pick);
      remaining.erase(std::remove(remaining.begin(), remaining.end(), pick),
                      remaining.end());
    }

    while (unravel_step(st, sig)) {
    }

    if (!is_polarity_safe(st.clause, sig))
      throw std::runtime_error("internal: output is not polarity-safe");
    run.components.push_back(st.clause);
    for (auto& step : st.trace) run.trace.push_back(std::move(step));
  }
  return run;
}

}  // namespace incept
