#include "incept/signature.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace incept {

const ConnectiveSpec* Signature::find(const std::string& name) const {
  for (const auto& c : connectives)
    if (c.name == name) return &c;
  return nullptr;
}

const ConnectiveSpec& Signature::at(const std::string& name) const {
  const ConnectiveSpec* c = find(name);
  if (!c) throw std::runtime_error("unknown connective: " + name);
  return *c;
}

OrderType Signature::linkedOrderType(const ResidualLink& link) const {
  const ConnectiveSpec& t = at(link.conn);
  // Tonicity of the abstract residual at position p is the tonicity of the
  // target at the position q that receives argument p.
  OrderType eps(t.arity, Tone::Pos);
  for (int q = 0; q < t.arity; ++q) eps[link.argOf[q]] = t.orderType[q];
  return eps;
}

std::string residual_auto_name(const ConnectiveSpec& parent, int coord) {
  const char* kind = parent.family == Family::F ? ".rres." : ".lres.";
  return parent.name + kind + std::to_string(coord);
}

namespace {

// Slot tonicity of the root relation: for f in F the relation is
// f(xs) <= x0, which is up-closed in x0 and in the dual coordinates;
// for g in G the relation x0 <= g(xs) is down-closed in x0.
std::vector<bool> slot_up(const ConnectiveSpec& prim) {
  std::vector<bool> up(prim.arity + 1);
  up[0] = prim.family == Family::F;
  for (int j = 0; j < prim.arity; ++j)
    up[j + 1] = prim.family == Family::F ? prim.orderType[j] == Tone::Neg
                                         : prim.orderType[j] == Tone::Pos;
  return up;
}

// Family and order-type of a family member from its slot assignment.
void member_profile(const std::vector<bool>& up, int outSlot,
                    const std::vector<int>& slotOfPos, Family& fam,
                    OrderType& eps) {
  fam = up[outSlot] ? Family::F : Family::G;
  eps.clear();
  for (int s : slotOfPos)
    eps.push_back(up[s] != up[outSlot] ? Tone::Pos : Tone::Neg);
}

}  // namespace

Signature close_under_residuals(const Signature& sig) {
  Signature out;
  out.aliases = sig.aliases;

  for (const auto& c : sig.connectives) {
    if (out.has(c.name)) throw std::runtime_error("duplicate connective: " + c.name);
    ConnectiveSpec n = c;
    if ((int)n.orderType.size() != n.arity)
      throw std::runtime_error("order-type/arity mismatch on " + n.name);
    if (n.isPrimitive()) {
      n.root = n.name;
      n.outSlot = 0;
      n.slotOfPos.clear();
      for (int j = 1; j <= n.arity; ++j) n.slotOfPos.push_back(j);
    } else if ((int)n.slotOfPos.size() != n.arity) {
      throw std::runtime_error("connective " + n.name +
                               " is neither primitive nor closure output");
    }
    n.residuals.assign(n.arity, ResidualLink{});
    out.connectives.push_back(std::move(n));
  }

  // canonical member per (root, output slot)
  std::map<std::pair<std::string, int>, std::string> canon;
  std::map<std::string, std::vector<bool>> rootUp;
  for (const auto& c : out.connectives)
    if (c.isPrimitive()) {
      canon[{c.name, 0}] = c.name;
      rootUp[c.name] = slot_up(c);
    }
  // pre-closed inputs may already carry family members
  for (const auto& c : out.connectives)
    if (!c.isPrimitive()) canon[{c.root, c.outSlot}] = c.name;

  auto mut = [&out](const std::string& n) -> ConnectiveSpec& {
    for (auto& c : out.connectives)
      if (c.name == n) return c;
    throw std::runtime_error("unknown connective: " + n);
  };

  std::deque<std::string> work;
  for (const auto& c : out.connectives) work.push_back(c.name);

  while (!work.empty()) {
    const std::string name = work.front();
    work.pop_front();
    const int arity = mut(name).arity;
    for (int k = 1; k <= arity; ++k) {
      if (!mut(name).residuals[k - 1].conn.empty()) continue;
      const ConnectiveSpec h = mut(name);  // copy: push_back below relocates
      // abstract residual at coordinate k: output slot is the slot held at
      // position k, position k now holds the old output slot
      int newOut = h.slotOfPos[k - 1];
      std::vector<int> slots = h.slotOfPos;
      slots[k - 1] = h.outSlot;
      auto key = std::make_pair(h.root, newOut);
      auto it = canon.find(key);
      if (it == canon.end()) {
        ConnectiveSpec r;
        std::string autoName = residual_auto_name(h, k);
        auto al = out.aliases.find(autoName);
        r.name = al == out.aliases.end() ? autoName : al->second;
        if (out.has(r.name))
          throw std::runtime_error("residual name collision: " + r.name);
        r.arity = h.arity;
        r.parent = h.name;
        r.parentCoord = k;
        r.root = h.root;
        r.outSlot = newOut;
        r.slotOfPos = slots;
        member_profile(rootUp.at(h.root), newOut, slots, r.family, r.orderType);
        r.residuals.assign(r.arity, ResidualLink{});
        canon[key] = r.name;
        work.push_back(r.name);
        std::vector<int> id(h.arity);
        for (int i = 0; i < h.arity; ++i) id[i] = i;
        std::string rname = r.name;
        out.connectives.push_back(std::move(r));
        mut(name).residuals[k - 1] = ResidualLink{rname, id};
      } else {
        const ConnectiveSpec t = mut(it->second);
        // position q of the target holds slot t.slotOfPos[q]; it receives the
        // abstract-residual argument holding the same slot
        std::vector<int> argOf(t.arity);
        for (int q = 0; q < t.arity; ++q) {
          int s = t.slotOfPos[q];
          int p = -1;
          for (int i = 0; i < h.arity; ++i)
            if (slots[i] == s) p = i;
          if (p < 0) throw std::runtime_error("slot mismatch closing " + name);
          argOf[q] = p;
        }
        mut(name).residuals[k - 1] = ResidualLink{t.name, argOf};
      }
    }
  }
  return out;
}

std::vector<Diagnostic> validate_signature(const Signature& sig) {
  std::vector<Diagnostic> diags;
  auto bad = [&](const std::string& path, const std::string& msg) {
    diags.push_back({path, msg});
  };

  std::set<std::string> seen;
  for (const auto& c : sig.connectives) {
    if (!seen.insert(c.name).second) bad(c.name, "duplicate connective name");
    if ((int)c.orderType.size() != c.arity)
      bad(c.name, "order-type length differs from arity");
    if (!c.isPrimitive()) {
      const ConnectiveSpec* p = sig.find(c.parent);
      if (!p) {
        bad(c.name, "residual parent missing: " + c.parent);
        continue;
      }
      if (c.parentCoord < 1 || c.parentCoord > p->arity)
        bad(c.name, "residual coordinate out of range");
    }
  }
  if (!diags.empty()) return diags;

  for (const auto& c : sig.connectives) {
    for (int k = 1; k <= c.arity; ++k) {
      const std::string path = c.name + "#" + std::to_string(k);
      if ((int)c.residuals.size() < c.arity || c.residuals[k - 1].conn.empty()) {
        bad(path, "missing residual");
        continue;
      }
      const ResidualLink& link = c.residuals[k - 1];
      const ConnectiveSpec* t = sig.find(link.conn);
      if (!t) {
        bad(path, "residual points to unknown connective " + link.conn);
        continue;
      }
      if (t->arity != c.arity) {
        bad(path, "residual arity mismatch");
        continue;
      }
      std::vector<int> sortCheck = link.argOf;
      std::sort(sortCheck.begin(), sortCheck.end());
      bool perm = (int)sortCheck.size() == c.arity;
      for (int i = 0; perm && i < c.arity; ++i) perm = sortCheck[i] == i;
      if (!perm) {
        bad(path, "residual argument map is not a permutation");
        continue;
      }
      // family flip law
      Family expect;
      if (c.family == Family::F)
        expect = c.orderType[k - 1] == Tone::Pos ? Family::G : Family::F;
      else
        expect = c.orderType[k - 1] == Tone::Pos ? Family::F : Family::G;
      if (t->family != expect) bad(path, "residual family violates flip law");
      // order-type law through the link
      OrderType eps = sig.linkedOrderType(link);
      if (eps[k - 1] != c.orderType[k - 1])
        bad(path, "residual order-type wrong at the residuated coordinate");
      for (int j = 0; j < c.arity; ++j) {
        if (j == k - 1) continue;
        Tone want = tpow(c.orderType[j], flip(c.orderType[k - 1]));
        if (eps[j] != want)
          bad(path + "@" + std::to_string(j + 1),
              "residual order-type wrong at coordinate " + std::to_string(j + 1));
      }
      // the link is mutual: residuating the target where it received the old
      // output leads back to this connective
      int back = -1;
      for (int q = 0; q < t->arity; ++q)
        if (link.argOf[q] == k - 1) back = q;
      if (back >= 0 && (int)t->residuals.size() == t->arity &&
          !t->residuals[back].conn.empty()) {
        if (t->residuals[back].conn != c.name)
          bad(path, "residual link is not mutual");
      }
    }
  }
  return diags;
}

std::string signature_to_json(const Signature& sig) {
  nlohmann::ordered_json j;
  j["connectives"] = nlohmann::ordered_json::array();
  for (const auto& c : sig.connectives) {
    if (!c.isPrimitive()) continue;
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["family"] = c.family == Family::F ? "F" : "G";
    jc["arity"] = c.arity;
    auto ot = nlohmann::ordered_json::array();
    for (Tone t : c.orderType) {
      if (t == Tone::Pos)
        ot.push_back(1);
      else
        ot.push_back("d");
    }
    jc["order_type"] = ot;
    j["connectives"].push_back(jc);
  }
  if (!sig.aliases.empty()) {
    nlohmann::ordered_json ja;
    for (const auto& [k, v] : sig.aliases) ja[k] = v;
    j["residual_aliases"] = ja;
  }
  return j.dump(2) + "\n";
}

Signature signature_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Signature sig;
  for (const auto& jc : j.at("connectives")) {
    ConnectiveSpec c;
    c.name = jc.at("name").get<std::string>();
    std::string fam = jc.at("family").get<std::string>();
    if (fam != "F" && fam != "G")
      throw std::runtime_error("bad family for " + c.name);
    c.family = fam == "F" ? Family::F : Family::G;
    c.arity = jc.at("arity").get<int>();
    for (const auto& e : jc.at("order_type")) {
      if (e.is_number() && e.get<int>() == 1)
        c.orderType.push_back(Tone::Pos);
      else if (e.is_string() && e.get<std::string>() == "d")
        c.orderType.push_back(Tone::Neg);
      else
        throw std::runtime_error("bad order_type entry for " + c.name);
    }
    sig.connectives.push_back(std::move(c));
  }
  if (j.contains("residual_aliases"))
    for (auto it = j["residual_aliases"].begin(); it != j["residual_aliases"].end(); ++it)
      sig.aliases[it.key()] = it.value().get<std::string>();
  return sig;
}

}  // namespace incept
