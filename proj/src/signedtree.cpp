#include "incept/signedtree.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace incept {

namespace {

NodeClass classify(const Formula& f, bool positive, const Signature& sig) {
  switch (f.kind) {
    case Formula::Kind::Atom:
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      return NodeClass::Leaf;
    case Formula::Kind::And:
      return positive ? NodeClass::SRA : NodeClass::DeltaAdjoint;
    case Formula::Kind::Or:
      return positive ? NodeClass::DeltaAdjoint : NodeClass::SRA;
    case Formula::Kind::Conn: {
      const ConnectiveSpec& c = sig.at(f.name);
      if (c.arity == 0) return NodeClass::Leaf;
      if (c.family == Family::F) {
        if (positive) return NodeClass::SLR;
        return c.arity == 1 ? NodeClass::SRA : NodeClass::SRR;
      }
      if (!positive) return NodeClass::SLR;
      return c.arity == 1 ? NodeClass::SRA : NodeClass::SRR;
    }
  }
  return NodeClass::Leaf;
}

bool childSign(const Formula& f, int i, bool positive, const Signature& sig) {
  if (f.kind == Formula::Kind::And || f.kind == Formula::Kind::Or)
    return positive;
  const ConnectiveSpec& c = sig.at(f.name);
  return c.orderType[i] == Tone::Pos ? positive : !positive;
}

void leavesRec(const SignedTree& t, Branch& path, std::vector<LeafInfo>& out,
               const SignedTree& root) {
  if (t.children.empty()) {
    LeafInfo li;
    li.branch = path;
    if (t.node->kind == Formula::Kind::Atom) li.var = t.node->name;
    li.positive = t.positive;
    li.depth = branch_depth(root, path);
    // good = the class word from the root is Skeleton* PIA*
    bool seenPIA = false, good = true;
    const SignedTree* cur = &root;
    for (int ix : path) {
      if (isPIA(cur->cls)) seenPIA = true;
      if (isSkeleton(cur->cls) && seenPIA) good = false;
      cur = &cur->children[ix];
    }
    li.good = good;
    out.push_back(li);
    return;
  }
  for (size_t i = 0; i < t.children.size(); ++i) {
    path.push_back((int)i);
    leavesRec(t.children[i], path, out, root);
    path.pop_back();
  }
}

const SignedTree* descend(const SignedTree& t, const Branch& b, size_t upto) {
  const SignedTree* cur = &t;
  for (size_t i = 0; i < upto; ++i) cur = &cur->children[b[i]];
  return cur;
}

std::string branchKey(bool lhsSide, const Branch& b) {
  std::string s = lhsSide ? "+/" : "-/";
  for (int i : b) s += std::to_string(i) + ".";
  return s;
}

// Does the signed subtree agree with epsilon^d, i.e. is every variable leaf
// epsilon^d-critical?
bool agreesWithDual(const SignedTree& t, const std::map<std::string, Tone>& eps) {
  if (t.children.empty()) {
    if (t.node->kind != Formula::Kind::Atom) return true;
    auto it = eps.find(t.node->name);
    if (it == eps.end()) return true;
    Tone dual = flip(it->second);
    return t.positive ? dual == Tone::Pos : dual == Tone::Neg;
  }
  for (const auto& c : t.children)
    if (!agreesWithDual(c, eps)) return false;
  return true;
}

void varsBelow(const SignedTree& t, std::set<std::string>& out) {
  if (t.children.empty()) {
    if (t.node->kind == Formula::Kind::Atom) out.insert(t.node->name);
    return;
  }
  for (const auto& c : t.children) varsBelow(c, out);
}

struct OmegaCheck {
  // pairs (a,b): a < b required
  std::set<std::pair<std::string, std::string>> required;
  bool ok = true;
};

// Checks the two Definition conditions on one side; accumulates required
// dependency pairs when collect is set, otherwise verifies against omega.
bool sideInductive(const SignedTree& tree, const std::map<std::string, Tone>& eps,
                   const std::set<std::pair<std::string, std::string>>* omega,
                   OmegaCheck* collect) {
  std::vector<LeafInfo> ls = leaves(tree);
  for (const auto& leaf : ls) {
    if (leaf.var.empty()) continue;
    Tone e = eps.at(leaf.var);
    bool critical = leaf.positive ? e == Tone::Pos : e == Tone::Neg;
    if (!critical) continue;
    if (!leaf.good) return false;
    // SRR side conditions along the critical branch
    for (size_t d = 0; d < leaf.branch.size(); ++d) {
      const SignedTree* n = descend(tree, leaf.branch, d);
      if (n->cls != NodeClass::SRR) continue;
      int onBranch = leaf.branch[d];
      for (size_t l = 0; l < n->children.size(); ++l) {
        if ((int)l == onBranch) continue;
        if (!agreesWithDual(n->children[l], eps)) return false;
        std::set<std::string> gs;
        varsBelow(n->children[l], gs);
        for (const auto& pk : gs) {
          if (pk == leaf.var) return false;  // p < p is never irreflexive
          if (collect)
            collect->required.insert({pk, leaf.var});
          else if (!omega->count({pk, leaf.var}))
            return false;
        }
      }
    }
  }
  return true;
}

std::set<std::pair<std::string, std::string>> transitiveClosure(
    std::set<std::pair<std::string, std::string>> rel) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [a, b] : std::set(rel))
      for (const auto& [c, d] : std::set(rel))
        if (b == c && !rel.count({a, d})) {
          rel.insert({a, d});
          changed = true;
        }
  }
  return rel;
}

// Outermost Delta-adjoint reachable from the root through Skeleton nodes.
std::optional<Branch> skeletonDelta(const SignedTree& t) {
  struct Item {
    const SignedTree* n;
    Branch path;
  };
  std::vector<Item> queue{{&t, {}}};
  for (size_t q = 0; q < queue.size(); ++q) {
    const SignedTree* n = queue[q].n;
    if (n->cls == NodeClass::DeltaAdjoint) return queue[q].path;
    if (n->cls != NodeClass::SLR) continue;
    for (size_t i = 0; i < n->children.size(); ++i) {
      Branch p = queue[q].path;
      p.push_back((int)i);
      queue.push_back({&n->children[i], std::move(p)});
    }
  }
  return std::nullopt;
}

Formula replaceAt(const Formula& f, const Branch& b, size_t i, const Formula& sub) {
  if (i == b.size()) return sub;
  Formula out = f;
  out.args[b[i]] = replaceAt(f.args[b[i]], b, i + 1, sub);
  return out;
}

const Formula* formulaAt(const Formula& f, const Branch& b) {
  const Formula* cur = &f;
  for (int ix : b) cur = &cur->args[ix];
  return cur;
}

}  // namespace

SignedTree sign_tree(const Formula& f, bool positive, const Signature& sig) {
  SignedTree t;
  t.positive = positive;
  t.cls = classify(f, positive, sig);
  t.node = &f;
  for (size_t i = 0; i < f.args.size(); ++i)
    t.children.push_back(sign_tree(f.args[i], childSign(f, (int)i, positive, sig), sig));
  return t;
}

std::pair<SignedTree, SignedTree> sign_trees(const Inequality& iq,
                                             const Signature& sig) {
  return {sign_tree(iq.lhs, true, sig), sign_tree(iq.rhs, false, sig)};
}

std::vector<LeafInfo> leaves(const SignedTree& t) {
  std::vector<LeafInfo> out;
  Branch path;
  leavesRec(t, path, out, t);
  return out;
}

int branch_depth(const SignedTree& t, const Branch& b) {
  int depth = 0;
  bool seenPIA = false;
  const SignedTree* cur = &t;
  for (size_t i = 0; i <= b.size(); ++i) {
    if (!cur->children.empty()) {
      if (isPIA(cur->cls)) {
        seenPIA = true;
      } else if (seenPIA) {
        ++depth;        // a Skeleton segment below some PIA segment
        seenPIA = false;
      }
    }
    if (i < b.size()) cur = &cur->children[b[i]];
  }
  return depth;
}

bool check_inductive(const Inequality& iq, const std::map<std::string, Tone>& epsilon,
                     const std::vector<std::pair<std::string, std::string>>& omega,
                     const Signature& sig) {
  // omega must be a strict partial order
  std::set<std::pair<std::string, std::string>> rel(omega.begin(), omega.end());
  rel = transitiveClosure(rel);
  for (const auto& [a, b] : rel)
    if (a == b) return false;
  for (const auto& v : variables(iq, VarKind::Prop))
    if (!epsilon.count(v)) return false;
  auto [lt, rt] = sign_trees(iq, sig);
  return sideInductive(lt, epsilon, &rel, nullptr) &&
         sideInductive(rt, epsilon, &rel, nullptr);
}

std::optional<Certificate> find_inductive_certificate(const Inequality& iq,
                                                      const Signature& sig) {
  std::vector<std::string> vars = variables(iq, VarKind::Prop);
  auto [lt, rt] = sign_trees(iq, sig);
  size_t n = vars.size();
  for (unsigned long long code = 0; code < (1ull << n); ++code) {
    std::map<std::string, Tone> eps;
    for (size_t k = 0; k < n; ++k)
      eps[vars[k]] = (code >> (n - 1 - k)) & 1 ? Tone::Neg : Tone::Pos;
    OmegaCheck collect;
    if (!sideInductive(lt, eps, nullptr, &collect)) continue;
    if (!sideInductive(rt, eps, nullptr, &collect)) continue;
    auto closed = transitiveClosure(collect.required);
    bool irrefl = true;
    for (const auto& [a, b] : closed)
      if (a == b) irrefl = false;
    if (!irrefl) continue;

    Certificate cert;
    cert.epsilon = eps;
    cert.omega.assign(closed.begin(), closed.end());
    bool analytic = true;
    int depth = 0;
    for (bool lhsSide : {true, false}) {
      const SignedTree& t = lhsSide ? lt : rt;
      for (const auto& leaf : leaves(t)) {
        cert.branchDepths[branchKey(lhsSide, leaf.branch)] = leaf.depth;
        depth = std::max(depth, leaf.depth);
        if (!leaf.good) analytic = false;
      }
    }
    cert.depth = depth;
    cert.analytic = analytic;
    auto noSkeletonDelta = [](const SignedTree& t) {
      return !skeletonDelta(t).has_value();
    };
    cert.definite = noSkeletonDelta(lt) && noSkeletonDelta(rt);
    return cert;
  }
  return std::nullopt;
}

std::vector<Inequality> split_definite(const Inequality& iq, const Signature& sig) {
  std::vector<Inequality> out;
  std::vector<Inequality> todo{iq};
  while (!todo.empty()) {
    Inequality cur = todo.back();
    todo.pop_back();
    auto [lt, rt] = sign_trees(cur, sig);
    if (auto b = skeletonDelta(lt)) {
      const Formula* d = formulaAt(cur.lhs, *b);
      for (int i = 1; i >= 0; --i)  // leftmost component pops first
        todo.push_back({replaceAt(cur.lhs, *b, 0, d->args[i]), cur.rhs});
      continue;
    }
    if (auto b = skeletonDelta(rt)) {
      const Formula* d = formulaAt(cur.rhs, *b);
      for (int i = 1; i >= 0; --i)
        todo.push_back({cur.lhs, replaceAt(cur.rhs, *b, 0, d->args[i])});
      continue;
    }
    out.push_back(cur);
  }
  return out;
}

}  // namespace incept
