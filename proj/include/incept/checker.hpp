#ifndef INCEPT_CHECKER_HPP
#define INCEPT_CHECKER_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "incept/kernel.hpp"

namespace incept {

struct Derivation {
  std::string rule;
  DSequent concl;
  std::vector<Derivation> prems;
  std::vector<Derivation> dreams;  // one per contract premise, in order
};

struct Calculus {
  Signature sig;
  std::vector<RuleSchema> base;
  std::vector<RuleSchema> structural;

  static Calculus make(Signature sig, const std::vector<RuleGroup>& groups);
  const RuleSchema* findBase(const std::string& name) const;
};

struct CheckReport {
  bool ok = true;
  std::string path;     // node path like /p0/d1
  std::string message;
};

// Full verification: instances, dreams, parameter freshness and scoping.
CheckReport check_derivation(const Derivation& d, const Calculus& calc);

int inception_depth(const Derivation& d, const Calculus& calc);
bool is_cut_free(const Derivation& d);

// Occurrence of a (sub)structure in some node's conclusion sequent.
struct Occurrence {
  std::string node;  // derivation path
  OccPath at;
  bool operator<(const Occurrence& o) const {
    return std::tie(node, at) < std::tie(o.node, o.at);
  }
  bool operator==(const Occurrence& o) const {
    return node == o.node && at == o.at;
  }
};

struct CongruenceMap {
  std::map<Occurrence, int> classOf;
  std::map<int, std::vector<Occurrence>> members;

  std::vector<Occurrence> congruent_to(const Occurrence& o) const;
};

// Requires a derivation that checks; includes dream-internal metavariables.
CongruenceMap congruence_classes(const Derivation& d, const Calculus& calc);

// ---- serialization ----

std::string derivation_to_json(const Derivation& d);
// The loader expands {"macro":"chain"} nodes into explicit display/logical
// steps found by breadth-first search between the stated endpoints.
Derivation derivation_from_json(const std::string& text, const Calculus& calc);

// Cut-free derivation of A |- A for an arbitrary formula.
Derivation derive_identity(const Formula& a, const Calculus& calc);

// Wraps a derivation in a chain of display/invertible-logical steps down to
// `target;` returns nullopt when unreachable.
std::optional<Derivation> chain_to(Derivation d, const DSequent& target,
                                   const Calculus& calc);

}  // namespace incept

#endif
