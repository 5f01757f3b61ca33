#ifndef INCEPT_KERNEL_HPP
#define INCEPT_KERNEL_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "incept/structure.hpp"

namespace incept {

struct ContractSchema;

// Uniform rule schema covering base logical/display rules and generated
// structural rules (with contracts).
struct RuleSchema {
  std::string name;
  int depth = 0;
  std::vector<DSequent> premises;
  std::vector<ContractSchema> contracts;
  DSequent conclusion;
};

struct ContractSchema {
  DSequent aim;
  std::vector<std::string> uninstantiable;
  std::vector<RuleSchema> rules;
};

struct Subst {
  std::map<std::string, StructNode> svars;
  std::map<std::string, Formula> fvars;

  bool boundS(const std::string& n) const { return svars.count(n) != 0; }
};

// Applies a substitution; unbound metavariables stay schematic.
StructNode apply_subst(const StructNode& schema, const Subst& s);
DSequent apply_subst(const DSequent& schema, const Subst& s);

// Syntactic matching of a schema against a concrete structure; extends s.
// Names in `frozen` may not be (re)bound by matching.
bool match_struct(const StructNode& schema, const StructNode& conc, Subst& s,
                  const std::set<std::string>* frozen = nullptr);
bool match_sequent(const DSequent& schema, const DSequent& conc, Subst& s,
                   const std::set<std::string>* frozen = nullptr);

// Unique most-general match of the rule conclusion; frozen = the rule's own
// contract-uninstantiable names (they never occur in conclusions anyway).
std::optional<Subst> match_conclusion(const RuleSchema& rule, const DSequent& seq,
                                      const Subst& pending);

// Every base rule of D.LE for the closed signature: Id, Cut, the lattice
// rules, per-primitive logical introductions and all display postulates.
std::vector<RuleSchema> base_rules(const Signature& sig);

// Structural rule (rulegen output) -> checker schema.
RuleSchema schema_from_rule(const InceptionRule& r);

// ---- display ----

struct DisplayStep {
  std::string rule;  // dp.<conn>.<k>.out applied at the top of one side
  DSequent result;
};

struct DisplayResult {
  DSequent sequent;
  std::vector<DisplayStep> trace;
};

// Displays the substructure at `path` as the full antecedent or succedent.
DisplayResult display(const DSequent& seq, const OccPath& path, const Signature& sig);

// All sequents reachable by display postulates (small, finite).
std::vector<DSequent> display_orbit(const DSequent& seq, const Signature& sig,
                                    size_t limit = 4096);
bool display_equivalent(const DSequent& a, const DSequent& b, const Signature& sig);

// Shortest display chain from `from` to `to`, as steps; empty when equal.
std::optional<std::vector<DisplayStep>> display_path(const DSequent& from,
                                                     const DSequent& to,
                                                     const Signature& sig);

}  // namespace incept

#endif
