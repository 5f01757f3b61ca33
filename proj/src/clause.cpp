#include "incept/clause.hpp"

#include <map>
#include <stdexcept>

#include "json.hpp"

namespace incept {

int clause_depth(const Clause& c) {
  int d = 0;
  for (const auto& a : c.ante) {
    if (!a.isClause) continue;
    // a nested clause is a contract level; its own nested clauses are rules
    int inner = 0;
    for (const auto& b : a.clause().ante)
      if (b.isClause) inner = std::max(inner, clause_depth(b.clause()));
    d = std::max(d, 1 + inner);
  }
  return d;
}

namespace {

struct AlphaMap {
  std::map<std::string, std::string> fwd, bwd;
  bool bind(const std::string& a, const std::string& b) {
    auto f = fwd.find(a);
    auto g = bwd.find(b);
    if (f == fwd.end() && g == bwd.end()) {
      fwd[a] = b;
      bwd[b] = a;
      return true;
    }
    return f != fwd.end() && g != bwd.end() && f->second == b && g->second == a;
  }
  bool same(const std::string& a, const std::string& b) const {
    auto f = fwd.find(a);
    if (f != fwd.end()) return f->second == b;
    return a == b && !bwd.count(b);
  }
};

bool alphaFormula(const Formula& a, const Formula& b, const AlphaMap& m) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  if (a.kind == Formula::Kind::Atom)
    return a.var == b.var && m.same(a.name, b.name);
  if (a.kind == Formula::Kind::Conn && a.name != b.name) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!alphaFormula(a.args[i], b.args[i], m)) return false;
  return true;
}

bool alphaClause(const Clause& a, const Clause& b, AlphaMap m) {
  if (a.propVars.size() != b.propVars.size() ||
      a.nomVars.size() != b.nomVars.size() ||
      a.conomVars.size() != b.conomVars.size() ||
      a.ante.size() != b.ante.size())
    return false;
  for (size_t i = 0; i < a.propVars.size(); ++i)
    if (!m.bind(a.propVars[i], b.propVars[i])) return false;
  for (size_t i = 0; i < a.nomVars.size(); ++i)
    if (!m.bind(a.nomVars[i], b.nomVars[i])) return false;
  for (size_t i = 0; i < a.conomVars.size(); ++i)
    if (!m.bind(a.conomVars[i], b.conomVars[i])) return false;
  for (size_t i = 0; i < a.ante.size(); ++i) {
    if (a.ante[i].isClause != b.ante[i].isClause) return false;
    if (a.ante[i].isClause) {
      if (!alphaClause(a.ante[i].clause(), b.ante[i].clause(), m)) return false;
    } else {
      if (!alphaFormula(a.ante[i].ineq.lhs, b.ante[i].ineq.lhs, m) ||
          !alphaFormula(a.ante[i].ineq.rhs, b.ante[i].ineq.rhs, m))
        return false;
    }
  }
  return alphaFormula(a.conseq.lhs, b.conseq.lhs, m) &&
         alphaFormula(a.conseq.rhs, b.conseq.rhs, m);
}

void printRec(const Clause& c, std::string& out, int indent) {
  std::string pad(indent * 2, ' ');
  out += pad + "forall";
  for (const auto& v : c.propVars) out += " " + v;
  for (const auto& v : c.nomVars) out += " " + v;
  for (const auto& v : c.conomVars) out += " " + v;
  out += " (\n";
  for (const auto& a : c.ante) {
    if (a.isClause) {
      printRec(a.clause(), out, indent + 1);
      out += pad + "  &\n";
    } else {
      out += pad + "  " + print_formula(a.ineq.lhs) + " <= " +
             print_formula(a.ineq.rhs) + "  &\n";
    }
  }
  out += pad + "  =>  " + print_formula(c.conseq.lhs) + " <= " +
         print_formula(c.conseq.rhs) + "\n";
  out += pad + ")\n";
}

nlohmann::ordered_json fml(const Formula& f) { return print_formula(f); }

nlohmann::ordered_json clauseJson(const Clause& c) {
  nlohmann::ordered_json j;
  j["props"] = c.propVars;
  j["nominals"] = c.nomVars;
  j["conominals"] = c.conomVars;
  auto ja = nlohmann::ordered_json::array();
  for (const auto& a : c.ante) {
    if (a.isClause)
      ja.push_back(nlohmann::ordered_json{{"clause", clauseJson(a.clause())}});
    else
      ja.push_back(nlohmann::ordered_json{{"lhs", fml(a.ineq.lhs)},
                                          {"rhs", fml(a.ineq.rhs)}});
  }
  j["antecedents"] = ja;
  j["conseq"] = {{"lhs", fml(c.conseq.lhs)}, {"rhs", fml(c.conseq.rhs)}};
  return j;
}

// Pure-term parsing: leaves that look like quantified variables are retagged
// to their kind by name lookup in the enclosing clause chain.
void retag(Formula& f, const std::map<std::string, VarKind>& kinds) {
  if (f.kind == Formula::Kind::Atom) {
    auto it = kinds.find(f.name);
    if (it != kinds.end()) f.var = it->second;
    return;
  }
  for (auto& a : f.args) retag(a, kinds);
}

Clause clauseFromJson(const nlohmann::json& j, const Signature& sig,
                      std::map<std::string, VarKind> kinds) {
  Clause c;
  for (const auto& v : j.at("props")) {
    c.propVars.push_back(v.get<std::string>());
    kinds[c.propVars.back()] = VarKind::Prop;
  }
  for (const auto& v : j.at("nominals")) {
    c.nomVars.push_back(v.get<std::string>());
    kinds[c.nomVars.back()] = VarKind::Nom;
  }
  for (const auto& v : j.at("conominals")) {
    c.conomVars.push_back(v.get<std::string>());
    kinds[c.conomVars.back()] = VarKind::Conom;
  }
  auto ineq = [&](const nlohmann::json& ji) {
    PureIneq iq{parse_formula(ji.at("lhs").get<std::string>(), sig),
                parse_formula(ji.at("rhs").get<std::string>(), sig)};
    retag(iq.lhs, kinds);
    retag(iq.rhs, kinds);
    return iq;
  };
  for (const auto& ja : j.at("antecedents")) {
    if (ja.contains("clause"))
      c.ante.push_back(Clause::nested(clauseFromJson(ja["clause"], sig, kinds)));
    else
      c.ante.push_back(Clause::plain(ineq(ja)));
  }
  c.conseq = ineq(j.at("conseq"));
  return c;
}

}  // namespace

bool alpha_equal(const Clause& a, const Clause& b) {
  return alphaClause(a, b, AlphaMap{});
}

std::string print_clause(const Clause& c) {
  std::string out;
  printRec(c, out, 0);
  return out;
}

std::string clause_to_json(const Clause& c) { return clauseJson(c).dump(2) + "\n"; }

Clause clause_from_json(const std::string& text, const Signature& sig) {
  return clauseFromJson(nlohmann::json::parse(text), sig, {});
}

}  // namespace incept
