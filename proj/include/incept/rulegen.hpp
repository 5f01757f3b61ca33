#ifndef INCEPT_RULEGEN_HPP
#define INCEPT_RULEGEN_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "incept/clause.hpp"
#include "incept/signature.hpp"

namespace incept {

// Metastructure: structure metavariables composed with structural connectives
// under the two-sorted discipline. fsort tracks the sort of the node itself.
struct MStruct {
  enum class Kind : unsigned char { Var, SConn, STop, SBot };
  Kind kind = Kind::Var;
  std::string name;  // metavariable name or connective name
  bool fsort = true;
  std::vector<MStruct> args;

  bool operator==(const MStruct& o) const {
    return kind == o.kind && name == o.name && fsort == o.fsort && args == o.args;
  }
  static MStruct var(std::string n, bool f) {
    MStruct m;
    m.name = std::move(n);
    m.fsort = f;
    return m;
  }
  static MStruct sconn(std::string n, bool f, std::vector<MStruct> as) {
    MStruct m;
    m.kind = Kind::SConn;
    m.name = std::move(n);
    m.fsort = f;
    m.args = std::move(as);
    return m;
  }
};

struct MSequent {
  MStruct ante, succ;
  bool operator==(const MSequent& o) const {
    return ante == o.ante && succ == o.succ;
  }
};

struct InceptionRule;

struct ContractSpec {
  MSequent aim;
  std::vector<std::string> uninstantiable;
  std::vector<InceptionRule> rules;
};

struct InceptionRule {
  std::string name;
  std::vector<MSequent> plain;
  std::vector<ContractSpec> contracts;
  MSequent conclusion;
};

// Per the recursive definition: contracts count one more than their deepest
// rule, a rule counts its deepest contract premise.
int rule_depth(const InceptionRule& r);
int contract_depth(const ContractSpec& c);

struct RuleGroup {
  std::string axiom;                    // printed source inequality
  std::vector<InceptionRule> rules;     // one per definite component
};

// The s(.) translation from a polarity-safe clause. Metavariable names are
// the upper-cased clause variables; contract rules are named
// <parent>.c<k>.r<j>.
InceptionRule translate(const Clause& c, const Signature& sig,
                        const std::string& name);

// Diagnostics for the analytic conditions on a depth-0 rule: conclusion
// linearity and premise-variable containment.
std::vector<Diagnostic> check_analytic(const InceptionRule& r);

// C1-C5 plus the endsequent-freshness scan for ALBA-generated rules.
std::vector<Diagnostic> lint_rule(const InceptionRule& r, const Signature& sig);

// Sort discipline check against the closed signature.
std::vector<Diagnostic> sort_check(const InceptionRule& r, const Signature& sig);

std::set<std::string> metavariables(const MStruct& m);
void metavariables(const MStruct& m, std::set<std::string>& out);

std::string print_mstruct(const MStruct& m);
std::string print_msequent(const MSequent& s);
MStruct parse_mstruct(const std::string& text, const Signature& sig);
MSequent parse_msequent(const std::string& text, const Signature& sig);

std::string rules_to_json(const std::vector<RuleGroup>& groups);
std::vector<RuleGroup> rules_from_json(const std::string& text, const Signature& sig);

// Plain-text proof-tree rendering for documentation output.
std::string render_rules(const std::vector<RuleGroup>& groups);

// Alpha-equivalence on whole rules (order-preserving metavariable renaming).
bool rules_alpha_equal(const InceptionRule& a, const InceptionRule& b);

}  // namespace incept

#endif
