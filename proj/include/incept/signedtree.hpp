#ifndef INCEPT_SIGNEDTREE_HPP
#define INCEPT_SIGNEDTREE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "incept/formula.hpp"

namespace incept {

enum class NodeClass : unsigned char { DeltaAdjoint, SLR, SRA, SRR, Leaf };

inline bool isSkeleton(NodeClass c) {
  return c == NodeClass::DeltaAdjoint || c == NodeClass::SLR;
}
inline bool isPIA(NodeClass c) {
  return c == NodeClass::SRA || c == NodeClass::SRR;
}

// Mirrors the formula tree; `positive` is the propagated sign.
struct SignedTree {
  bool positive;
  NodeClass cls;
  const Formula* node;
  std::vector<SignedTree> children;
};

SignedTree sign_tree(const Formula& f, bool positive, const Signature& sig);

// Positive tree for the left side, negative tree for the right side.
std::pair<SignedTree, SignedTree> sign_trees(const Inequality& iq,
                                             const Signature& sig);

// A root-to-leaf path, as child indices.
using Branch = std::vector<int>;

struct LeafInfo {
  Branch branch;
  std::string var;   // empty for constant leaves
  bool positive;
  int depth;         // Skeleton-to-PIA alternations seen from the leaf up
  bool good;
};

std::vector<LeafInfo> leaves(const SignedTree& t);

// Number of maximal Skeleton segments strictly below some PIA node on the
// branch (equivalently PIA-then-Skeleton factors read from the root); good
// branches have depth 0.
int branch_depth(const SignedTree& t, const Branch& b);

// epsilon maps every variable of the inequality; Omega holds the strict
// dependency pairs (a, b) meaning a < b.
struct Certificate {
  std::map<std::string, Tone> epsilon;
  std::vector<std::pair<std::string, std::string>> omega;
  int depth = 0;
  bool analytic = false;
  bool definite = false;
  std::map<std::string, int> branchDepths;  // keyed by printed branch path
};

bool check_inductive(const Inequality& iq, const std::map<std::string, Tone>& epsilon,
                     const std::vector<std::pair<std::string, std::string>>& omega,
                     const Signature& sig);

// Exhaustive search over order-types in binary order (Pos < Neg, variables in
// first-occurrence order); Omega is the least relation forced by the SRR side
// conditions. Returns the first certificate found.
std::optional<Certificate> find_inductive_certificate(const Inequality& iq,
                                                      const Signature& sig);

// Splits an inductive inequality at the Delta-adjoint nodes of its Skeleton
// into definite inductive components.
std::vector<Inequality> split_definite(const Inequality& iq, const Signature& sig);

}  // namespace incept

#endif
