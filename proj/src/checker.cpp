#include "incept/checker.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>

#include "json.hpp"

namespace incept {

Calculus Calculus::make(Signature sig, const std::vector<RuleGroup>& groups) {
  Calculus c;
  c.sig = std::move(sig);
  c.base = base_rules(c.sig);
  for (const auto& g : groups)
    for (const auto& r : g.rules) c.structural.push_back(schema_from_rule(r));
  return c;
}

const RuleSchema* Calculus::findBase(const std::string& name) const {
  for (const auto& r : base)
    if (r.name == name) return &r;
  return nullptr;
}

bool is_cut_free(const Derivation& d) {
  if (d.rule == "cut") return false;
  for (const auto& p : d.prems)
    if (!is_cut_free(p)) return false;
  for (const auto& dm : d.dreams)
    if (!is_cut_free(dm)) return false;
  return true;
}

namespace {

struct AvailRule {
  const RuleSchema* schema = nullptr;
  Subst pending;
  std::map<std::string, int> srcIds;  // source ids of pending-bound variables
  int depth = 0;
};

struct Ctx {
  std::map<std::string, AvailRule> rules;
  std::set<std::string> paramScope;
};

struct UnionFind {
  std::map<Occurrence, Occurrence> parent;
  Occurrence find(Occurrence o) {
    auto it = parent.find(o);
    if (it == parent.end()) {
      parent[o] = o;
      return o;
    }
    if (it->second == o) return o;
    Occurrence r = find(it->second);
    parent[o] = r;
    return r;
  }
  void unite(const Occurrence& a, const Occurrence& b) {
    Occurrence ra = find(a), rb = find(b);
    if (!(ra == rb)) parent[ra] = rb;
  }
};

struct Walker {
  const Calculus& calc;
  std::set<std::string> usedParams;
  int nextSrc = 0;
  int maxDepth = 0;
  bool buildCongruence = false;
  UnionFind uf;
  std::map<int, Occurrence> srcRep;  // a representative occurrence per source

  CheckReport fail(const std::string& path, const std::string& msg) {
    return {false, path, msg};
  }

  void collectParams(const StructNode& n, std::set<std::string>& out) {
    if (n.kind == StructNode::Kind::Param) out.insert(n.name);
    for (const auto& a : n.args) collectParams(a, out);
  }

  // Records all metavariable occurrences of `schema` within the concrete
  // sequent part, keyed by source ids.
  void record(const StructNode& schema, const StructNode& conc,
              const std::string& nodePath, OccPath at,
              const std::map<std::string, int>& src) {
    switch (schema.kind) {
      case StructNode::Kind::SVar:
      case StructNode::Kind::FVar:
      case StructNode::Kind::AtomVar: {
        auto it = src.find(schema.name);
        if (it == src.end()) return;
        Occurrence occ{nodePath, at};
        auto rep = srcRep.find(it->second);
        if (rep == srcRep.end())
          srcRep[it->second] = occ;
        else
          uf.unite(rep->second, occ);
        uf.find(occ);
        return;
      }
      case StructNode::Kind::SConn:
      case StructNode::Kind::FApp: {
        if (conc.kind == StructNode::Kind::SConn) {
          for (size_t i = 0; i < schema.args.size() && i < conc.args.size(); ++i) {
            OccPath sub = at;
            sub.path.push_back((int)i);
            record(schema.args[i], conc.args[i], nodePath, sub, src);
          }
        }
        return;
      }
      default:
        return;
    }
  }

  void recordSequent(const DSequent& schema, const DSequent& conc,
                     const std::string& nodePath,
                     const std::map<std::string, int>& src) {
    if (!buildCongruence) return;
    record(schema.ante, conc.ante, nodePath, OccPath{true, {}}, src);
    record(schema.succ, conc.succ, nodePath, OccPath{false, {}}, src);
  }

  CheckReport walk(const Derivation& d, const Ctx& ctx, const std::string& path) {
    // parameters in this sequent must be in scope
    std::set<std::string> ps;
    collectParams(d.concl.ante, ps);
    collectParams(d.concl.succ, ps);
    for (const auto& p : ps)
      if (!ctx.paramScope.count(p))
        return fail(path, "parameter #" + p + " escapes its contract scope");

    auto it = ctx.rules.find(d.rule);
    if (it == ctx.rules.end())
      return fail(path, "rule " + d.rule + " not available here");
    const AvailRule& avail = it->second;
    const RuleSchema& schema = *avail.schema;
    maxDepth = std::max(maxDepth, avail.depth);

    auto om = match_conclusion(schema, d.concl, avail.pending);
    if (!om) return fail(path, "conclusion does not match rule " + d.rule);
    Subst sigma = *om;

    if (d.prems.size() != schema.premises.size())
      return fail(path, "premise count mismatch for " + d.rule);
    for (size_t i = 0; i < d.prems.size(); ++i) {
      DSequent expect = apply_subst(schema.premises[i], sigma);
      if (!expect.ante.isConcrete() || !expect.succ.isConcrete()) {
        if (!match_sequent(expect, d.prems[i].concl, sigma))
          return fail(path + "/p" + std::to_string(i),
                      "premise does not fit rule " + d.rule);
        expect = apply_subst(schema.premises[i], sigma);
      }
      if (!(expect == d.prems[i].concl))
        return fail(path + "/p" + std::to_string(i),
                    "expected premise " + print_dsequent(expect));
    }

    if (d.dreams.size() != schema.contracts.size())
      return fail(path, "contract obligation count mismatch for " + d.rule);

    // source ids for every metavariable bound by this application
    std::map<std::string, int> src = avail.srcIds;
    auto srcFor = [&](const std::string& v) {
      auto f = src.find(v);
      if (f != src.end()) return f->second;
      src[v] = nextSrc++;
      return src[v];
    };
    for (const auto& [v, s] : sigma.svars) srcFor(v);
    for (const auto& [v, s] : sigma.fvars) srcFor(v);

    recordSequent(schema.conclusion, d.concl, path, src);
    for (size_t i = 0; i < d.prems.size(); ++i)
      recordSequent(schema.premises[i], d.prems[i].concl, path + "/p" + std::to_string(i),
                    src);

    for (size_t j = 0; j < schema.contracts.size(); ++j) {
      const ContractSchema& con = schema.contracts[j];
      const Derivation& dream = d.dreams[j];
      DSequent aim = apply_subst(con.aim, sigma);
      Subst sigma2 = sigma;
      if (!match_sequent(aim, dream.concl, sigma2))
        return fail(path + "/d" + std::to_string(j),
                    "dream endsequent differs from the contract aim");
      std::set<std::string> newParams;
      for (const auto& u : con.uninstantiable) {
        auto b = sigma2.svars.find(u);
        if (b == sigma2.svars.end())
          return fail(path + "/d" + std::to_string(j),
                      "uninstantiable " + u + " unused in the aim");
        if (b->second.kind != StructNode::Kind::Param)
          return fail(path + "/d" + std::to_string(j),
                      "uninstantiable " + u + " instantiated by a structure");
        if (!usedParams.insert(b->second.name).second)
          return fail(path + "/d" + std::to_string(j),
                      "parameter #" + b->second.name + " reused across contracts");
        newParams.insert(b->second.name);
      }
      // nothing but the uninstantiables may have been bound by the aim match
      for (const auto& [v, val] : sigma2.svars)
        if (!sigma.svars.count(v) &&
            std::find(con.uninstantiable.begin(), con.uninstantiable.end(), v) ==
                con.uninstantiable.end())
          return fail(path + "/d" + std::to_string(j),
                      "aim metavariable " + v + " not fixed by the application");

      std::map<std::string, int> src2 = src;
      for (const auto& u : con.uninstantiable) srcFor(u);
      src2 = src;
      for (const auto& [v, s] : sigma2.svars)
        if (!src2.count(v)) src2[v] = nextSrc++;
      recordSequent(con.aim, dream.concl, path + "/d" + std::to_string(j), src2);

      Ctx dctx;
      dctx.paramScope = ctx.paramScope;
      for (const auto& p : newParams) dctx.paramScope.insert(p);
      for (const auto& br : calc.base)
        dctx.rules[br.name] = AvailRule{&br, Subst{}, {}, 0};
      for (const auto& sr : calc.structural)
        if (sr.depth == 0)
          dctx.rules[sr.name] = AvailRule{&sr, Subst{}, {}, 0};
      for (const auto& cr : con.rules) {
        AvailRule ar;
        ar.schema = &cr;
        ar.pending = sigma2;
        ar.srcIds = src2;
        ar.depth = cr.depth;
        dctx.rules[cr.name] = ar;
      }
      CheckReport rep = walk(dream, dctx, path + "/d" + std::to_string(j));
      if (!rep.ok) return rep;
    }

    for (size_t i = 0; i < d.prems.size(); ++i) {
      CheckReport rep = walk(d.prems[i], ctx, path + "/p" + std::to_string(i));
      if (!rep.ok) return rep;
    }
    return {true, "", ""};
  }

  Ctx topContext() {
    Ctx ctx;
    for (const auto& br : calc.base)
      ctx.rules[br.name] = AvailRule{&br, Subst{}, {}, 0};
    for (const auto& sr : calc.structural)
      ctx.rules[sr.name] = AvailRule{&sr, Subst{}, {}, sr.depth};
    return ctx;
  }
};

}  // namespace

CheckReport check_derivation(const Derivation& d, const Calculus& calc) {
  Walker w{calc};
  return w.walk(d, w.topContext(), "");
}

int inception_depth(const Derivation& d, const Calculus& calc) {
  Walker w{calc};
  CheckReport rep = w.walk(d, w.topContext(), "");
  if (!rep.ok)
    throw std::runtime_error("inception_depth on a non-checking derivation: " +
                             rep.message);
  return w.maxDepth;
}

std::vector<Occurrence> CongruenceMap::congruent_to(const Occurrence& o) const {
  auto it = classOf.find(o);
  if (it == classOf.end()) return {o};
  return members.at(it->second);
}

CongruenceMap congruence_classes(const Derivation& d, const Calculus& calc) {
  Walker w{calc};
  w.buildCongruence = true;
  CheckReport rep = w.walk(d, w.topContext(), "");
  if (!rep.ok)
    throw std::runtime_error("congruence on a non-checking derivation: " +
                             rep.message);
  CongruenceMap cm;
  int next = 0;
  std::map<std::string, int> classIds;
  std::vector<Occurrence> occs;
  for (const auto& [o, p] : w.uf.parent) occs.push_back(o);
  for (const auto& o : occs) {
    Occurrence root = w.uf.find(o);
    std::string key = root.node + "|" + (root.at.inAnte ? "a" : "s");
    for (int ix : root.at.path) key += "." + std::to_string(ix);
    auto it = classIds.find(key);
    int id = it == classIds.end() ? (classIds[key] = next++) : it->second;
    cm.classOf[o] = id;
    cm.members[id].push_back(o);
  }
  return cm;
}

// ---- identity derivations and chaining ----

Derivation derive_identity(const Formula& a, const Calculus& calc) {
  const Signature& sig = calc.sig;
  switch (a.kind) {
    case Formula::Kind::Atom:
      return {"id", {StructNode::formula(a), StructNode::formula(a)}, {}, {}};
    case Formula::Kind::Top:
      return {"top_r", {StructNode::formula(a), StructNode::formula(a)}, {}, {}};
    case Formula::Kind::Bot:
      return {"bot_l", {StructNode::formula(a), StructNode::formula(a)}, {}, {}};
    case Formula::Kind::And: {
      Derivation l{"and_l1",
                   {StructNode::formula(a), StructNode::formula(a.args[0])},
                   {derive_identity(a.args[0], calc)},
                   {}};
      Derivation r{"and_l2",
                   {StructNode::formula(a), StructNode::formula(a.args[1])},
                   {derive_identity(a.args[1], calc)},
                   {}};
      return {"and_r",
              {StructNode::formula(a), StructNode::formula(a)},
              {std::move(l), std::move(r)},
              {}};
    }
    case Formula::Kind::Or: {
      Derivation l{"or_r1",
                   {StructNode::formula(a.args[0]), StructNode::formula(a)},
                   {derive_identity(a.args[0], calc)},
                   {}};
      Derivation r{"or_r2",
                   {StructNode::formula(a.args[1]), StructNode::formula(a)},
                   {derive_identity(a.args[1], calc)},
                   {}};
      return {"or_l",
              {StructNode::formula(a), StructNode::formula(a)},
              {std::move(l), std::move(r)},
              {}};
    }
    case Formula::Kind::Conn: {
      const ConnectiveSpec& c = sig.at(a.name);
      std::vector<Derivation> ids;
      std::vector<StructNode> fmlArgs;
      for (const auto& arg : a.args) {
        ids.push_back(derive_identity(arg, calc));
        fmlArgs.push_back(StructNode::formula(arg));
      }
      if (c.family == Family::F) {
        Derivation fr{"fr." + a.name,
                      {StructNode::sconn(a.name, true, fmlArgs),
                       StructNode::formula(a)},
                      std::move(ids),
                      {}};
        return {"fl." + a.name,
                {StructNode::formula(a), StructNode::formula(a)},
                {std::move(fr)},
                {}};
      }
      Derivation gl{"gl." + a.name,
                    {StructNode::formula(a),
                     StructNode::sconn(a.name, false, fmlArgs)},
                    std::move(ids),
                    {}};
      return {"gr." + a.name,
              {StructNode::formula(a), StructNode::formula(a)},
              {std::move(gl)},
              {}};
    }
  }
  throw std::runtime_error("unreachable");
}

namespace {

// Downward moves usable in macro chains: display postulates plus the
// invertible logical introductions f_L and g_R.
struct Move {
  std::string rule;
  DSequent result;
};

std::vector<Move> downMoves(const DSequent& s, const Signature& sig) {
  std::vector<Move> out;
  for (bool onAnte : {true, false}) {
    const StructNode& side = onAnte ? s.ante : s.succ;
    if (side.kind != StructNode::Kind::SConn) continue;
    const ConnectiveSpec& c = sig.at(side.name);
    for (int k = 1; k <= c.arity; ++k) {
      OccPath p{onAnte, {k - 1}};
      DisplayResult dr = display(s, p, sig);
      out.push_back({dr.trace.front().rule, dr.sequent});
    }
    // f_L / g_R when every argument is already a formula
    bool allFml = true;
    for (const auto& a : side.args)
      if (a.kind != StructNode::Kind::Fml) allFml = false;
    if (allFml && c.arity >= 0) {
      std::vector<Formula> args;
      for (const auto& a : side.args) args.push_back(a.fml);
      if (onAnte && c.family == Family::F && c.isPrimitive()) {
        DSequent nxt{StructNode::formula(Formula::conn(side.name, args)), s.succ};
        out.push_back({"fl." + side.name, nxt});
      }
      if (!onAnte && c.family == Family::G && c.isPrimitive()) {
        DSequent nxt{s.ante, StructNode::formula(Formula::conn(side.name, args))};
        out.push_back({"gr." + side.name, nxt});
      }
    }
  }
  return out;
}

}  // namespace

std::optional<Derivation> chain_to(Derivation d, const DSequent& target,
                                   const Calculus& calc) {
  if (d.concl == target) return d;
  struct Item {
    DSequent seq;
    std::vector<Move> steps;
  };
  std::set<std::string> seen{print_dsequent(d.concl)};
  std::deque<Item> work{{d.concl, {}}};
  while (!work.empty()) {
    Item cur = work.front();
    work.pop_front();
    for (const Move& m : downMoves(cur.seq, calc.sig)) {
      if (!seen.insert(print_dsequent(m.result)).second) continue;
      auto steps = cur.steps;
      steps.push_back(m);
      if (m.result == target) {
        Derivation acc = std::move(d);
        for (const Move& st : steps)
          acc = Derivation{st.rule, st.result, {std::move(acc)}, {}};
        return acc;
      }
      work.push_back({m.result, std::move(steps)});
    }
    if (seen.size() > 20000) break;
  }
  return std::nullopt;
}

// ---- serialization ----

namespace {

nlohmann::ordered_json derivJson(const Derivation& d) {
  nlohmann::ordered_json j;
  j["rule"] = d.rule;
  j["conclusion"] = print_dsequent(d.concl);
  if (!d.prems.empty()) {
    auto a = nlohmann::ordered_json::array();
    for (const auto& p : d.prems) a.push_back(derivJson(p));
    j["premises"] = a;
  }
  if (!d.dreams.empty()) {
    auto a = nlohmann::ordered_json::array();
    for (const auto& dm : d.dreams) a.push_back(derivJson(dm));
    j["dreams"] = a;
  }
  return j;
}

Derivation derivFromJson(const nlohmann::json& j, const Calculus& calc) {
  if (j.contains("macro")) {
    if (j.at("macro") != "chain")
      throw std::runtime_error("unknown macro " + j.at("macro").get<std::string>());
    Derivation inner = derivFromJson(j.at("premise"), calc);
    DSequent target = parse_dsequent(j.at("conclusion").get<std::string>(), calc.sig);
    auto chained = chain_to(std::move(inner), target, calc);
    if (!chained)
      throw std::runtime_error("macro chain cannot reach " +
                               j.at("conclusion").get<std::string>());
    return *chained;
  }
  Derivation d;
  d.rule = j.at("rule").get<std::string>();
  d.concl = parse_dsequent(j.at("conclusion").get<std::string>(), calc.sig);
  if (j.contains("premises"))
    for (const auto& p : j.at("premises")) d.prems.push_back(derivFromJson(p, calc));
  if (j.contains("dreams"))
    for (const auto& p : j.at("dreams")) d.dreams.push_back(derivFromJson(p, calc));
  return d;
}

}  // namespace

std::string derivation_to_json(const Derivation& d) {
  return derivJson(d).dump(2) + "\n";
}

Derivation derivation_from_json(const std::string& text, const Calculus& calc) {
  return derivFromJson(nlohmann::json::parse(text), calc);
}

}  // namespace incept
