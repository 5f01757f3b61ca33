#include "incept/rulegen.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>

#include "json.hpp"

namespace incept {

int contract_depth(const ContractSpec& c) {
  int d = 0;
  for (const auto& r : c.rules) d = std::max(d, rule_depth(r));
  return 1 + d;
}

int rule_depth(const InceptionRule& r) {
  int d = 0;
  for (const auto& c : r.contracts) d = std::max(d, contract_depth(c));
  return d;
}

namespace {

std::string upcase(const std::string& s) {
  std::string out = s;
  for (auto& ch : out) ch = (char)std::toupper((unsigned char)ch);
  return out;
}

struct Translator {
  const Signature& sig;

  MStruct term(const Formula& f, bool fsort) {
    switch (f.kind) {
      case Formula::Kind::Atom: {
        if (f.var == VarKind::Prop)
          throw std::runtime_error("clause still carries proposition letter " + f.name);
        bool varSort = f.var == VarKind::Nom;
        if (varSort != fsort)
          throw std::runtime_error("variable " + f.name + " at the wrong sort");
        return MStruct::var(upcase(f.name), fsort);
      }
      case Formula::Kind::Top:
        if (!fsort) throw std::runtime_error("top at succedent sort");
        return MStruct{MStruct::Kind::STop, "", true, {}};
      case Formula::Kind::Bot:
        if (fsort) throw std::runtime_error("bot at antecedent sort");
        return MStruct{MStruct::Kind::SBot, "", false, {}};
      case Formula::Kind::And:
      case Formula::Kind::Or:
        throw std::runtime_error("lattice connective has no structural proxy");
      case Formula::Kind::Conn: {
        const ConnectiveSpec& c = sig.at(f.name);
        bool connSort = c.family == Family::F;
        if (connSort != fsort)
          throw std::runtime_error("connective " + f.name + " at the wrong sort");
        std::vector<MStruct> args;
        for (size_t i = 0; i < f.args.size(); ++i) {
          bool argSort = c.orderType[i] == Tone::Pos ? fsort : !fsort;
          args.push_back(term(f.args[i], argSort));
        }
        return MStruct::sconn(f.name, fsort, std::move(args));
      }
    }
    throw std::runtime_error("unreachable");
  }

  MSequent sequent(const PureIneq& iq) {
    return {term(iq.lhs, true), term(iq.rhs, false)};
  }

  InceptionRule rule(const Clause& c, const std::string& name) {
    InceptionRule r;
    r.name = name;
    r.conclusion = sequent(c.conseq);
    int k = 0;
    for (const auto& a : c.ante) {
      if (!a.isClause) {
        r.plain.push_back(sequent(a.ineq));
        continue;
      }
      const Clause& g = a.clause();
      ContractSpec spec;
      spec.aim = sequent(g.conseq);
      for (const auto& v : g.nomVars) spec.uninstantiable.push_back(upcase(v));
      for (const auto& v : g.conomVars) spec.uninstantiable.push_back(upcase(v));
      int j = 0;
      std::string prefix = name + ".c" + std::to_string(k);
      for (const auto& b : g.ante) {
        if (!b.isClause) {
          // a plain conjunct at contract level becomes a premise-free
          // contract rule, i.e. an axiom available inside the dream
          InceptionRule ax;
          ax.name = prefix + ".r" + std::to_string(j++);
          ax.conclusion = sequent(b.ineq);
          spec.rules.push_back(std::move(ax));
          continue;
        }
        spec.rules.push_back(rule(b.clause(), prefix + ".r" + std::to_string(j++)));
      }
      r.contracts.push_back(std::move(spec));
      ++k;
    }
    return r;
  }
};

void collectPositions(const MStruct& m, bool precedent,
                      std::map<std::string, std::vector<bool>>& out) {
  if (m.kind == MStruct::Kind::Var) {
    out[m.name].push_back(precedent);
    return;
  }
  for (size_t i = 0; i < m.args.size(); ++i) {
    bool flip = m.args[i].fsort != m.fsort;
    collectPositions(m.args[i], flip ? !precedent : precedent, out);
  }
}

void positionsOfSequent(const MSequent& s,
                        std::map<std::string, std::vector<bool>>& out) {
  collectPositions(s.ante, true, out);
  collectPositions(s.succ, false, out);
}

void allRules(const InceptionRule& r, std::vector<const InceptionRule*>& out) {
  out.push_back(&r);
  for (const auto& c : r.contracts)
    for (const auto& cr : c.rules) allRules(cr, out);
}

}  // namespace

void metavariables(const MStruct& m, std::set<std::string>& out) {
  if (m.kind == MStruct::Kind::Var) {
    out.insert(m.name);
    return;
  }
  for (const auto& a : m.args) metavariables(a, out);
}

std::set<std::string> metavariables(const MStruct& m) {
  std::set<std::string> out;
  metavariables(m, out);
  return out;
}

InceptionRule translate(const Clause& c, const Signature& sig,
                        const std::string& name) {
  Translator t{sig};
  return t.rule(c, name);
}

std::vector<Diagnostic> check_analytic(const InceptionRule& r) {
  std::vector<Diagnostic> diags;
  if (rule_depth(r) != 0) {
    diags.push_back({r.name, "not a depth-0 rule"});
    return diags;
  }
  std::map<std::string, std::vector<bool>> concl;
  positionsOfSequent(r.conclusion, concl);
  for (const auto& [v, occ] : concl)
    if (occ.size() > 1)
      diags.push_back({r.name, "metavariable " + v + " occurs " +
                                   std::to_string(occ.size()) +
                                   " times in the conclusion"});
  std::set<std::string> cv;
  metavariables(r.conclusion.ante, cv);
  metavariables(r.conclusion.succ, cv);
  for (const auto& p : r.plain) {
    std::set<std::string> pv;
    metavariables(p.ante, pv);
    metavariables(p.succ, pv);
    for (const auto& v : pv)
      if (!cv.count(v))
        diags.push_back({r.name, "premise metavariable " + v +
                                     " missing from the conclusion"});
  }
  return diags;
}

std::vector<Diagnostic> sort_check(const InceptionRule& r, const Signature& sig) {
  std::vector<Diagnostic> diags;
  std::function<void(const MStruct&, bool, const std::string&)> walk =
      [&](const MStruct& m, bool fsort, const std::string& path) {
        if (m.fsort != fsort)
          diags.push_back({path, "sort mismatch"});
        switch (m.kind) {
          case MStruct::Kind::Var:
          case MStruct::Kind::STop:
          case MStruct::Kind::SBot:
            return;
          case MStruct::Kind::SConn: {
            const ConnectiveSpec* c = sig.find(m.name);
            if (!c) {
              diags.push_back({path, "unknown structural connective " + m.name});
              return;
            }
            if ((c->family == Family::F) != fsort)
              diags.push_back({path, "structural connective family clash"});
            if ((int)m.args.size() != c->arity) {
              diags.push_back({path, "structural arity mismatch"});
              return;
            }
            for (int i = 0; i < c->arity; ++i)
              walk(m.args[i],
                   c->orderType[i] == Tone::Pos ? fsort : !fsort,
                   path + "." + std::to_string(i + 1));
            return;
          }
        }
      };
  std::vector<const InceptionRule*> rs;
  allRules(r, rs);
  for (const InceptionRule* rr : rs) {
    walk(rr->conclusion.ante, true, rr->name + "/concl.ante");
    walk(rr->conclusion.succ, false, rr->name + "/concl.succ");
    for (size_t i = 0; i < rr->plain.size(); ++i) {
      walk(rr->plain[i].ante, true, rr->name + "/p" + std::to_string(i) + ".ante");
      walk(rr->plain[i].succ, false, rr->name + "/p" + std::to_string(i) + ".succ");
    }
    for (size_t i = 0; i < rr->contracts.size(); ++i) {
      walk(rr->contracts[i].aim.ante, true,
           rr->name + "/c" + std::to_string(i) + ".ante");
      walk(rr->contracts[i].aim.succ, false,
           rr->name + "/c" + std::to_string(i) + ".succ");
    }
  }
  return diags;
}

std::vector<Diagnostic> lint_rule(const InceptionRule& r, const Signature& sig) {
  std::vector<Diagnostic> diags;
  auto bad = [&](const std::string& p, const std::string& m) {
    diags.push_back({p, m});
  };

  // C1: structural rules mention no formulas, so preservation holds once no
  // formula constants appear in the schemas (our MStruct cannot hold any).

  // C2/C3/C4 per rule in the closure: a metavariable always has one sort
  // (shape-alikeness) and consistent position polarity; conclusions linear.
  std::vector<const InceptionRule*> rs;
  allRules(r, rs);
  for (const InceptionRule* rr : rs) {
    std::map<std::string, std::vector<bool>> concl, all;
    positionsOfSequent(rr->conclusion, concl);
    positionsOfSequent(rr->conclusion, all);
    for (const auto& p : rr->plain) positionsOfSequent(p, all);
    for (const auto& c : rr->contracts) positionsOfSequent(c.aim, all);
    for (const auto& [v, occ] : concl)
      if (occ.size() > 1) bad(rr->name, "C3: " + v + " duplicated in conclusion");
    for (const auto& [v, occ] : all)
      for (bool pos : occ)
        if (pos != occ.front())
          bad(rr->name, "C4: " + v + " occurs in both positions");
    // sorts consistent per metavariable
    std::map<std::string, bool> sort;
    std::function<void(const MStruct&)> sorts = [&](const MStruct& m) {
      if (m.kind == MStruct::Kind::Var) {
        auto it = sort.find(m.name);
        if (it == sort.end())
          sort[m.name] = m.fsort;
        else if (it->second != m.fsort)
          bad(rr->name, "C2: " + m.name + " used at two sorts");
        return;
      }
      for (const auto& a : m.args) sorts(a);
    };
    for (const auto& p : rr->plain) {
      sorts(p.ante);
      sorts(p.succ);
    }
    for (const auto& c : rr->contracts) {
      sorts(c.aim.ante);
      sorts(c.aim.succ);
    }
    sorts(rr->conclusion.ante);
    sorts(rr->conclusion.succ);
  }

  // C5 is vacuous for structural rules (no principal formula occurrences).

  // Endsequent freshness: conclusion metavariables of the outer rule never
  // occur in the conclusion of a contract rule at any depth, and every aim
  // metavariable comes from the owning rule's conclusion or the contract's
  // uninstantiable set.
  std::set<std::string> topConcl;
  metavariables(r.conclusion.ante, topConcl);
  metavariables(r.conclusion.succ, topConcl);
  std::function<void(const InceptionRule&, bool)> scan = [&](const InceptionRule& rr,
                                                             bool isTop) {
    std::set<std::string> own;
    metavariables(rr.conclusion.ante, own);
    metavariables(rr.conclusion.succ, own);
    if (!isTop)
      for (const auto& v : own)
        if (topConcl.count(v))
          bad(rr.name, "endsequent metavariable " + v + " reused in contract rule");
    for (const auto& c : rr.contracts) {
      std::set<std::string> aimv;
      metavariables(c.aim.ante, aimv);
      metavariables(c.aim.succ, aimv);
      std::set<std::string> uninst(c.uninstantiable.begin(), c.uninstantiable.end());
      for (const auto& v : aimv)
        if (!own.count(v) && !uninst.count(v))
          bad(rr.name, "aim metavariable " + v +
                           " neither from the endsequent nor uninstantiable");
      for (const auto& cr : c.rules) scan(cr, false);
    }
  };
  scan(r, true);

  for (auto& d : sort_check(r, sig)) diags.push_back(d);
  return diags;
}

namespace {

void printM(const MStruct& m, std::string& out) {
  switch (m.kind) {
    case MStruct::Kind::Var:
      out += m.name;
      return;
    case MStruct::Kind::STop:
      out += "^top";
      return;
    case MStruct::Kind::SBot:
      out += "!bot";
      return;
    case MStruct::Kind::SConn:
      out += m.fsort ? '^' : '!';
      out += m.name;
      out += '(';
      for (size_t i = 0; i < m.args.size(); ++i) {
        if (i) out += ", ";
        printM(m.args[i], out);
      }
      out += ')';
      return;
  }
}

struct MParser {
  const std::string& s;
  const Signature& sig;
  size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  }
  [[noreturn]] void fail(const std::string& m) {
    throw ParseError(m, (int)i);
  }
  bool take(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  std::string ident(bool upper) {
    skip();
    size_t j = i;
    auto first = [&](char c) {
      return upper ? std::isupper((unsigned char)c) : std::islower((unsigned char)c);
    };
    if (j >= s.size() || !first(s[j])) return "";
    while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_' ||
                            s[j] == '.'))
      ++j;
    std::string r = s.substr(i, j - i);
    i = j;
    return r;
  }

  MStruct mstruct() {
    skip();
    if (take('^') || (i < s.size() && s[i] == '!' && (++i, true))) {
      bool fsort = s[i - 1] == '^';
      std::string name = ident(false);
      if (name.empty()) fail("expected structural connective name");
      if (name == "top" && fsort) return MStruct{MStruct::Kind::STop, "", true, {}};
      if (name == "bot" && !fsort) return MStruct{MStruct::Kind::SBot, "", false, {}};
      const ConnectiveSpec* c = sig.find(name);
      if (!c) fail("unknown connective " + name);
      if ((c->family == Family::F) != fsort)
        fail("sort marker clashes with family of " + name);
      std::vector<MStruct> args;
      if (c->arity > 0 || take('(')) {
        if (c->arity > 0 && !take('(')) fail("expected '('");
        if (!take(')')) {
          do {
            args.push_back(mstruct());
          } while (take(','));
          if (!take(')')) fail("expected ')'");
        }
      }
      if ((int)args.size() != c->arity) fail("arity mismatch for " + name);
      // fix argument sorts
      MStruct m = MStruct::sconn(name, fsort, std::move(args));
      return m;
    }
    std::string v = ident(true);
    if (v.empty()) fail("expected a metastructure");
    return MStruct::var(v, true);  // sort resolved by resort()
  }
};

// Metavariable sorts are contextual: fix them top-down.
void resort(MStruct& m, bool fsort, const Signature& sig) {
  m.fsort = fsort;
  if (m.kind == MStruct::Kind::SConn) {
    const ConnectiveSpec& c = sig.at(m.name);
    for (int i = 0; i < c.arity; ++i)
      resort(m.args[i], c.orderType[i] == Tone::Pos ? fsort : !fsort, sig);
  }
}

nlohmann::ordered_json ruleJson(const InceptionRule& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["depth"] = rule_depth(r);
  auto prem = nlohmann::ordered_json::array();
  for (const auto& p : r.plain)
    prem.push_back({{"kind", "plain"}, {"sequent", print_msequent(p)}});
  for (const auto& c : r.contracts) {
    nlohmann::ordered_json jc;
    jc["kind"] = "contract";
    jc["aim"] = print_msequent(c.aim);
    jc["uninstantiable"] = c.uninstantiable;
    auto rs = nlohmann::ordered_json::array();
    for (const auto& cr : c.rules) rs.push_back(ruleJson(cr));
    jc["rules"] = rs;
    prem.push_back(jc);
  }
  j["premises"] = prem;
  j["conclusion"] = print_msequent(r.conclusion);
  return j;
}

InceptionRule ruleFromJson(const nlohmann::json& j, const Signature& sig) {
  InceptionRule r;
  r.name = j.at("name").get<std::string>();
  r.conclusion = parse_msequent(j.at("conclusion").get<std::string>(), sig);
  for (const auto& p : j.at("premises")) {
    if (p.at("kind") == "plain") {
      r.plain.push_back(parse_msequent(p.at("sequent").get<std::string>(), sig));
    } else {
      ContractSpec c;
      c.aim = parse_msequent(p.at("aim").get<std::string>(), sig);
      for (const auto& u : p.at("uninstantiable"))
        c.uninstantiable.push_back(u.get<std::string>());
      for (const auto& cr : p.at("rules")) c.rules.push_back(ruleFromJson(cr, sig));
      r.contracts.push_back(std::move(c));
    }
  }
  return r;
}

void renderRule(const InceptionRule& r, std::string& out, int indent) {
  std::string pad(indent * 2, ' ');
  std::string prems;
  for (size_t i = 0; i < r.plain.size(); ++i) {
    if (i) prems += "   ";
    prems += print_msequent(r.plain[i]);
  }
  for (const auto& c : r.contracts) {
    if (!prems.empty()) prems += "   ";
    prems += "[" + print_msequent(c.aim) + "]^{";
    for (size_t i = 0; i < c.rules.size(); ++i) {
      if (i) prems += ",";
      prems += c.rules[i].name;
    }
    prems += "}_{";
    for (size_t i = 0; i < c.uninstantiable.size(); ++i) {
      if (i) prems += ",";
      prems += c.uninstantiable[i];
    }
    prems += "}";
  }
  out += pad + prems + "\n";
  std::string line(std::max(prems.size(), print_msequent(r.conclusion).size()), '-');
  out += pad + line + "  (" + r.name + ", depth " +
         std::to_string(rule_depth(r)) + ")\n";
  out += pad + print_msequent(r.conclusion) + "\n";
  for (const auto& c : r.contracts)
    for (const auto& cr : c.rules) {
      out += "\n";
      renderRule(cr, out, indent + 1);
    }
}

bool alphaM(const MStruct& a, const MStruct& b,
            std::map<std::string, std::string>& fwd,
            std::map<std::string, std::string>& bwd) {
  if (a.kind != b.kind || a.args.size() != b.args.size() || a.fsort != b.fsort)
    return false;
  if (a.kind == MStruct::Kind::Var) {
    auto f = fwd.find(a.name);
    auto g = bwd.find(b.name);
    if (f == fwd.end() && g == bwd.end()) {
      fwd[a.name] = b.name;
      bwd[b.name] = a.name;
      return true;
    }
    return f != fwd.end() && g != bwd.end() && f->second == b.name;
  }
  if (a.name != b.name) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!alphaM(a.args[i], b.args[i], fwd, bwd)) return false;
  return true;
}

bool alphaRule(const InceptionRule& a, const InceptionRule& b,
               std::map<std::string, std::string>& fwd,
               std::map<std::string, std::string>& bwd) {
  if (a.plain.size() != b.plain.size() || a.contracts.size() != b.contracts.size())
    return false;
  if (!alphaM(a.conclusion.ante, b.conclusion.ante, fwd, bwd) ||
      !alphaM(a.conclusion.succ, b.conclusion.succ, fwd, bwd))
    return false;
  for (size_t i = 0; i < a.plain.size(); ++i)
    if (!alphaM(a.plain[i].ante, b.plain[i].ante, fwd, bwd) ||
        !alphaM(a.plain[i].succ, b.plain[i].succ, fwd, bwd))
      return false;
  for (size_t i = 0; i < a.contracts.size(); ++i) {
    const auto& ca = a.contracts[i];
    const auto& cb = b.contracts[i];
    if (ca.uninstantiable.size() != cb.uninstantiable.size() ||
        ca.rules.size() != cb.rules.size())
      return false;
    if (!alphaM(ca.aim.ante, cb.aim.ante, fwd, bwd) ||
        !alphaM(ca.aim.succ, cb.aim.succ, fwd, bwd))
      return false;
    for (size_t k = 0; k < ca.uninstantiable.size(); ++k) {
      auto f = fwd.find(ca.uninstantiable[k]);
      if (f != fwd.end() && f->second != cb.uninstantiable[k]) return false;
    }
    for (size_t k = 0; k < ca.rules.size(); ++k)
      if (!alphaRule(ca.rules[k], cb.rules[k], fwd, bwd)) return false;
  }
  return true;
}

}  // namespace

std::string print_mstruct(const MStruct& m) {
  std::string out;
  printM(m, out);
  return out;
}

std::string print_msequent(const MSequent& s) {
  return print_mstruct(s.ante) + " |- " + print_mstruct(s.succ);
}

MStruct parse_mstruct(const std::string& text, const Signature& sig) {
  MParser p{text, sig};
  MStruct m = p.mstruct();
  p.skip();
  if (p.i != text.size()) p.fail("trailing input");
  return m;
}

MSequent parse_msequent(const std::string& text, const Signature& sig) {
  size_t at = text.find("|-");
  if (at == std::string::npos)
    throw ParseError("expected '|-'", (int)text.size());
  MSequent s;
  s.ante = [&] {
    MParser p{text, sig};
    MStruct m = p.mstruct();
    p.skip();
    if (p.i != at) p.fail("trailing input before '|-'");
    return m;
  }();
  std::string rhs = text.substr(at + 2);
  s.succ = parse_mstruct(rhs, sig);
  resort(s.ante, true, sig);
  resort(s.succ, false, sig);
  return s;
}

std::string rules_to_json(const std::vector<RuleGroup>& groups) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& g : groups) {
    nlohmann::ordered_json jg;
    jg["axiom"] = g.axiom;
    auto rs = nlohmann::ordered_json::array();
    for (const auto& r : g.rules) rs.push_back(ruleJson(r));
    jg["rules"] = rs;
    j.push_back(jg);
  }
  return j.dump(2) + "\n";
}

std::vector<RuleGroup> rules_from_json(const std::string& text,
                                       const Signature& sig) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<RuleGroup> out;
  for (const auto& jg : j) {
    RuleGroup g;
    g.axiom = jg.at("axiom").get<std::string>();
    for (const auto& jr : jg.at("rules")) g.rules.push_back(ruleFromJson(jr, sig));
    out.push_back(std::move(g));
  }
  return out;
}

std::string render_rules(const std::vector<RuleGroup>& groups) {
  std::string out;
  for (const auto& g : groups) {
    out += "axiom: " + g.axiom + "\n\n";
    for (const auto& r : g.rules) {
      renderRule(r, out, 0);
      out += "\n";
    }
  }
  return out;
}

bool rules_alpha_equal(const InceptionRule& a, const InceptionRule& b) {
  std::map<std::string, std::string> fwd, bwd;
  return alphaRule(a, b, fwd, bwd);
}

}  // namespace incept
