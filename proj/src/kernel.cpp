#include "incept/kernel.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace incept {

StructNode apply_subst(const StructNode& schema, const Subst& s) {
  switch (schema.kind) {
    case StructNode::Kind::SVar: {
      auto it = s.svars.find(schema.name);
      return it == s.svars.end() ? schema : it->second;
    }
    case StructNode::Kind::FVar:
    case StructNode::Kind::AtomVar: {
      auto it = s.fvars.find(schema.name);
      return it == s.fvars.end() ? schema : StructNode::formula(it->second);
    }
    case StructNode::Kind::FApp: {
      std::vector<Formula> args;
      bool ready = true;
      for (const auto& a : schema.args) {
        auto it = s.fvars.find(a.name);
        if (it == s.fvars.end()) {
          ready = false;
          break;
        }
        args.push_back(it->second);
      }
      if (!ready) {
        StructNode out = schema;
        for (auto& a : out.args) a = apply_subst(a, s);
        return out;
      }
      if (schema.name == "and") return StructNode::formula(Formula::conj(args[0], args[1]));
      if (schema.name == "or") return StructNode::formula(Formula::disj(args[0], args[1]));
      if (schema.name == "top") return StructNode::formula(Formula::top());
      if (schema.name == "bot") return StructNode::formula(Formula::bot());
      return StructNode::formula(Formula::conn(schema.name, std::move(args)));
    }
    default: {
      StructNode out = schema;
      for (auto& a : out.args) a = apply_subst(a, s);
      return out;
    }
  }
}

DSequent apply_subst(const DSequent& schema, const Subst& s) {
  return {apply_subst(schema.ante, s), apply_subst(schema.succ, s)};
}

namespace {

bool bindS(const std::string& name, const StructNode& conc, bool fsort, Subst& s,
           const std::set<std::string>* frozen) {
  if (frozen && frozen->count(name)) return false;
  auto it = s.svars.find(name);
  if (it != s.svars.end()) return it->second == conc;
  // sort sanity: parameters carry their own sort
  if (conc.kind == StructNode::Kind::Param && conc.fsort != fsort) return false;
  s.svars[name] = conc;
  return true;
}

bool bindF(const std::string& name, const Formula& f, Subst& s) {
  auto it = s.fvars.find(name);
  if (it != s.fvars.end()) return it->second == f;
  s.fvars[name] = f;
  return true;
}

}  // namespace

bool match_struct(const StructNode& schema, const StructNode& conc, Subst& s,
                  const std::set<std::string>* frozen) {
  switch (schema.kind) {
    case StructNode::Kind::SVar:
      return bindS(schema.name, conc, schema.fsort, s, frozen);
    case StructNode::Kind::FVar:
      return conc.kind == StructNode::Kind::Fml && bindF(schema.name, conc.fml, s);
    case StructNode::Kind::AtomVar:
      return conc.kind == StructNode::Kind::Fml &&
             conc.fml.kind == Formula::Kind::Atom &&
             conc.fml.var == VarKind::Prop && bindF(schema.name, conc.fml, s);
    case StructNode::Kind::FApp: {
      if (conc.kind != StructNode::Kind::Fml) return false;
      const Formula& f = conc.fml;
      if (schema.name == "and") {
        if (f.kind != Formula::Kind::And) return false;
      } else if (schema.name == "or") {
        if (f.kind != Formula::Kind::Or) return false;
      } else if (schema.name == "top") {
        return f.kind == Formula::Kind::Top;
      } else if (schema.name == "bot") {
        return f.kind == Formula::Kind::Bot;
      } else {
        if (f.kind != Formula::Kind::Conn || f.name != schema.name) return false;
      }
      if (schema.args.size() != f.args.size()) return false;
      for (size_t i = 0; i < schema.args.size(); ++i)
        if (!bindF(schema.args[i].name, f.args[i], s)) return false;
      return true;
    }
    case StructNode::Kind::Fml:
      return conc.kind == StructNode::Kind::Fml && conc.fml == schema.fml;
    case StructNode::Kind::STop:
    case StructNode::Kind::SBot:
      return conc.kind == schema.kind;
    case StructNode::Kind::Param:
      return conc == schema;
    case StructNode::Kind::SConn: {
      if (conc.kind != StructNode::Kind::SConn || conc.name != schema.name ||
          conc.args.size() != schema.args.size())
        return false;
      for (size_t i = 0; i < schema.args.size(); ++i)
        if (!match_struct(schema.args[i], conc.args[i], s, frozen)) return false;
      return true;
    }
  }
  return false;
}

bool match_sequent(const DSequent& schema, const DSequent& conc, Subst& s,
                   const std::set<std::string>* frozen) {
  return match_struct(schema.ante, conc.ante, s, frozen) &&
         match_struct(schema.succ, conc.succ, s, frozen);
}

std::optional<Subst> match_conclusion(const RuleSchema& rule, const DSequent& seq,
                                      const Subst& pending) {
  Subst s = pending;
  DSequent schema = apply_subst(rule.conclusion, pending);
  std::set<std::string> frozen;
  for (const auto& c : rule.contracts)
    for (const auto& u : c.uninstantiable) frozen.insert(u);
  if (!match_sequent(schema, seq, s, &frozen)) return std::nullopt;
  return s;
}

namespace {

std::string epsSuffix(int k) { return "." + std::to_string(k); }

RuleSchema makeDp(const Signature& sig, const ConnectiveSpec& c, int k, bool out) {
  const ResidualLink& link = c.residuals[k - 1];
  const ConnectiveSpec& t = sig.at(link.conn);
  bool hat = c.family == Family::F;

  // metavariables: A1..An for the arguments, S for the other side
  std::vector<StructNode> args;
  for (int i = 0; i < c.arity; ++i) {
    bool argF = c.orderType[i] == Tone::Pos ? hat : !hat;
    args.push_back(StructNode::svar("A" + std::to_string(i + 1), argF));
  }
  bool sIsF = !hat;  // the opposite side of the main structure
  StructNode other = StructNode::svar("S", sIsF);

  StructNode main = StructNode::sconn(c.name, hat, args);
  DSequent from = hat ? DSequent{main, other} : DSequent{other, main};

  // abstract residual argument vector: coordinate k holds the displaced side
  std::vector<StructNode> abstractArgs = args;
  abstractArgs[k - 1] = other;
  std::vector<StructNode> targs(t.arity);
  for (int q = 0; q < t.arity; ++q) targs[q] = abstractArgs[link.argOf[q]];
  StructNode resid = StructNode::sconn(t.name, t.family == Family::F, targs);

  DSequent to;
  if (hat) {
    if (c.orderType[k - 1] == Tone::Pos)
      to = DSequent{args[k - 1], resid};  // Pi_k |- f#k(...)
    else
      to = DSequent{resid, args[k - 1]};  // f#k(...) |- Sigma_k
  } else {
    if (c.orderType[k - 1] == Tone::Pos)
      to = DSequent{resid, args[k - 1]};  // g'b(...) |- Sigma_l
    else
      to = DSequent{args[k - 1], resid};  // Pi_l |- g'b(...)
  }

  RuleSchema r;
  r.name = "dp." + c.name + epsSuffix(k) + (out ? ".out" : ".in");
  r.premises = {out ? from : to};
  r.conclusion = out ? to : from;
  return r;
}

}  // namespace

std::vector<RuleSchema> base_rules(const Signature& sig) {
  std::vector<RuleSchema> rules;
  auto add = [&](RuleSchema r) { rules.push_back(std::move(r)); };

  {
    RuleSchema id;
    id.name = "id";
    id.conclusion = {StructNode::atomvar("p"), StructNode::atomvar("p")};
    add(id);
  }
  {
    RuleSchema cut;
    cut.name = "cut";
    cut.premises = {{StructNode::svar("P", true), StructNode::fvar("A")},
                    {StructNode::fvar("A"), StructNode::svar("S", false)}};
    cut.conclusion = {StructNode::svar("P", true), StructNode::svar("S", false)};
    add(cut);
  }
  for (int i = 0; i < 2; ++i) {
    RuleSchema r;
    r.name = i == 0 ? "and_l1" : "and_l2";
    r.premises = {{StructNode::fvar(i == 0 ? "A" : "B"), StructNode::svar("S", false)}};
    r.conclusion = {StructNode::fapp("and", {StructNode::fvar("A"), StructNode::fvar("B")}),
                    StructNode::svar("S", false)};
    add(r);
  }
  {
    RuleSchema r;
    r.name = "and_r";
    r.premises = {{StructNode::svar("P", true), StructNode::fvar("A")},
                  {StructNode::svar("P", true), StructNode::fvar("B")}};
    r.conclusion = {StructNode::svar("P", true),
                    StructNode::fapp("and", {StructNode::fvar("A"), StructNode::fvar("B")})};
    add(r);
  }
  {
    RuleSchema r;
    r.name = "or_l";
    r.premises = {{StructNode::fvar("A"), StructNode::svar("S", false)},
                  {StructNode::fvar("B"), StructNode::svar("S", false)}};
    r.conclusion = {StructNode::fapp("or", {StructNode::fvar("A"), StructNode::fvar("B")}),
                    StructNode::svar("S", false)};
    add(r);
  }
  for (int i = 0; i < 2; ++i) {
    RuleSchema r;
    r.name = i == 0 ? "or_r1" : "or_r2";
    r.premises = {{StructNode::svar("P", true), StructNode::fvar(i == 0 ? "A" : "B")}};
    r.conclusion = {StructNode::svar("P", true),
                    StructNode::fapp("or", {StructNode::fvar("A"), StructNode::fvar("B")})};
    add(r);
  }
  {
    RuleSchema r;
    r.name = "top_r";
    r.conclusion = {StructNode::svar("P", true), StructNode::fapp("top", {})};
    add(r);
  }
  {
    RuleSchema r;
    r.name = "bot_l";
    r.conclusion = {StructNode::fapp("bot", {}), StructNode::svar("S", false)};
    add(r);
  }

  for (const auto& c : sig.connectives) {
    if (!c.isPrimitive()) continue;
    std::vector<StructNode> fvars, svars;
    for (int i = 0; i < c.arity; ++i) {
      fvars.push_back(StructNode::fvar("A" + std::to_string(i + 1)));
      bool argF = c.orderType[i] == Tone::Pos ? (c.family == Family::F)
                                              : (c.family != Family::F);
      svars.push_back(StructNode::svar("X" + std::to_string(i + 1), argF));
    }
    if (c.family == Family::F) {
      RuleSchema fl;
      fl.name = "fl." + c.name;
      fl.premises = {{StructNode::sconn(c.name, true, fvars), StructNode::svar("S", false)}};
      fl.conclusion = {StructNode::fapp(c.name, fvars), StructNode::svar("S", false)};
      add(fl);

      RuleSchema fr;
      fr.name = "fr." + c.name;
      for (int i = 0; i < c.arity; ++i) {
        if (c.orderType[i] == Tone::Pos)
          fr.premises.push_back({svars[i], fvars[i]});
        else
          fr.premises.push_back({fvars[i], svars[i]});
      }
      fr.conclusion = {StructNode::sconn(c.name, true, svars),
                       StructNode::fapp(c.name, fvars)};
      add(fr);
    } else {
      RuleSchema gr;
      gr.name = "gr." + c.name;
      gr.premises = {{StructNode::svar("P", true), StructNode::sconn(c.name, false, fvars)}};
      gr.conclusion = {StructNode::svar("P", true), StructNode::fapp(c.name, fvars)};
      add(gr);

      RuleSchema gl;
      gl.name = "gl." + c.name;
      for (int i = 0; i < c.arity; ++i) {
        if (c.orderType[i] == Tone::Pos)
          gl.premises.push_back({fvars[i], svars[i]});
        else
          gl.premises.push_back({svars[i], fvars[i]});
      }
      gl.conclusion = {StructNode::fapp(c.name, fvars),
                       StructNode::sconn(c.name, false, svars)};
      add(gl);
    }
  }

  for (const auto& c : sig.connectives)
    for (int k = 1; k <= c.arity; ++k) {
      add(makeDp(sig, c, k, true));
      add(makeDp(sig, c, k, false));
    }

  return rules;
}

RuleSchema schema_from_rule(const InceptionRule& r) {
  RuleSchema out;
  out.name = r.name;
  out.depth = rule_depth(r);
  out.conclusion = {schema_from_mstruct(r.conclusion.ante),
                    schema_from_mstruct(r.conclusion.succ)};
  for (const auto& p : r.plain)
    out.premises.push_back({schema_from_mstruct(p.ante), schema_from_mstruct(p.succ)});
  for (const auto& c : r.contracts) {
    ContractSchema cs;
    cs.aim = {schema_from_mstruct(c.aim.ante), schema_from_mstruct(c.aim.succ)};
    cs.uninstantiable = c.uninstantiable;
    for (const auto& cr : c.rules) cs.rules.push_back(schema_from_rule(cr));
    out.contracts.push_back(std::move(cs));
  }
  return out;
}

namespace {

// One display step at the top of the side containing coordinate k.
DSequent dpStep(const DSequent& seq, bool onAnte, int k, const Signature& sig,
                std::string* ruleName) {
  const StructNode& main = onAnte ? seq.ante : seq.succ;
  const StructNode& other = onAnte ? seq.succ : seq.ante;
  if (main.kind != StructNode::Kind::SConn)
    throw std::runtime_error("display: not a structural connective");
  const ConnectiveSpec& c = sig.at(main.name);
  const ResidualLink& link = c.residuals[k - 1];
  const ConnectiveSpec& t = sig.at(link.conn);

  std::vector<StructNode> abstractArgs = main.args;
  abstractArgs[k - 1] = other;
  std::vector<StructNode> targs(t.arity);
  for (int q = 0; q < t.arity; ++q) targs[q] = abstractArgs[link.argOf[q]];
  StructNode resid = StructNode::sconn(t.name, t.family == Family::F, targs);
  if (ruleName)
    *ruleName = "dp." + main.name + "." + std::to_string(k) + ".out";

  const StructNode& moved = main.args[k - 1];
  if (onAnte) {
    return c.orderType[k - 1] == Tone::Pos ? DSequent{moved, resid}
                                           : DSequent{resid, moved};
  }
  return c.orderType[k - 1] == Tone::Pos ? DSequent{resid, moved}
                                         : DSequent{moved, resid};
}

}  // namespace

DisplayResult display(const DSequent& seq, const OccPath& path, const Signature& sig) {
  DisplayResult res;
  res.sequent = seq;
  bool onAnte = path.inAnte;
  std::vector<int> rest = path.path;
  while (!rest.empty()) {
    const StructNode& main = onAnte ? res.sequent.ante : res.sequent.succ;
    if (main.kind != StructNode::Kind::SConn)
      throw std::runtime_error("display: path enters a non-structural node");
    int k = rest.front() + 1;
    const ConnectiveSpec& c = sig.at(main.name);
    std::string rn;
    DSequent next = dpStep(res.sequent, onAnte, k, sig, &rn);
    // where did the moved argument land?
    bool nowAnte;
    if (onAnte)
      nowAnte = c.orderType[k - 1] == Tone::Pos;
    else
      nowAnte = c.orderType[k - 1] != Tone::Pos;
    res.trace.push_back({rn, next});
    res.sequent = next;
    onAnte = nowAnte;
    rest.erase(rest.begin());
  }
  return res;
}

std::vector<DSequent> display_orbit(const DSequent& seq, const Signature& sig,
                                    size_t limit) {
  std::vector<DSequent> out;
  std::set<std::string> seen;
  std::deque<DSequent> work{seq};
  seen.insert(print_dsequent(seq));
  while (!work.empty() && out.size() < limit) {
    DSequent cur = work.front();
    work.pop_front();
    out.push_back(cur);
    for (bool onAnte : {true, false}) {
      const StructNode& side = onAnte ? cur.ante : cur.succ;
      if (side.kind != StructNode::Kind::SConn) continue;
      const ConnectiveSpec& c = sig.at(side.name);
      for (int k = 1; k <= c.arity; ++k) {
        DSequent nxt = dpStep(cur, onAnte, k, sig, nullptr);
        if (seen.insert(print_dsequent(nxt)).second) work.push_back(nxt);
      }
    }
  }
  return out;
}

bool display_equivalent(const DSequent& a, const DSequent& b, const Signature& sig) {
  if (a == b) return true;
  for (const auto& s : display_orbit(a, sig))
    if (s == b) return true;
  return false;
}

std::optional<std::vector<DisplayStep>> display_path(const DSequent& from,
                                                     const DSequent& to,
                                                     const Signature& sig) {
  if (from == to) return std::vector<DisplayStep>{};
  struct Item {
    DSequent seq;
    std::vector<DisplayStep> steps;
  };
  std::set<std::string> seen{print_dsequent(from)};
  std::deque<Item> work{{from, {}}};
  while (!work.empty()) {
    Item cur = work.front();
    work.pop_front();
    for (bool onAnte : {true, false}) {
      const StructNode& side = onAnte ? cur.seq.ante : cur.seq.succ;
      if (side.kind != StructNode::Kind::SConn) continue;
      const ConnectiveSpec& c = sig.at(side.name);
      for (int k = 1; k <= c.arity; ++k) {
        std::string rn;
        DSequent nxt = dpStep(cur.seq, onAnte, k, sig, &rn);
        if (!seen.insert(print_dsequent(nxt)).second) continue;
        auto steps = cur.steps;
        steps.push_back({rn, nxt});
        if (nxt == to) return steps;
        work.push_back({nxt, std::move(steps)});
      }
    }
    if (seen.size() > 4096) break;
  }
  return std::nullopt;
}

}  // namespace incept
