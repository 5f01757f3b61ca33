#ifndef INCEPT_CLAUSE_HPP
#define INCEPT_CLAUSE_HPP

#include <string>
#include <vector>

#include "incept/formula.hpp"

namespace incept {

struct PureIneq {
  Formula lhs, rhs;
  bool operator==(const PureIneq& o) const {
    return lhs == o.lhs && rhs == o.rhs;
  }
};

struct Clause;

// One antecedent: either a plain inequality or a nested clause. `sub` holds
// at most one element; the vector is only indirection for the recursive type.
struct Ante {
  bool isClause = false;
  PureIneq ineq;
  std::vector<Clause> sub;

  const Clause& clause() const { return sub.front(); }
  Clause& clause() { return sub.front(); }
};

// Universally quantified implication: forall vars (antecedents => conseq).
// propVars is nonempty only in intermediate pipeline states.
struct Clause {
  std::vector<std::string> propVars;
  std::vector<std::string> nomVars;
  std::vector<std::string> conomVars;
  std::vector<Ante> ante;
  PureIneq conseq;

  static Ante plain(PureIneq iq) {
    Ante a;
    a.ineq = std::move(iq);
    return a;
  }
  static Ante nested(Clause c) {
    Ante a;
    a.isClause = true;
    a.sub.push_back(std::move(c));
    return a;
  }
};

// Depth of the inception rule this clause translates to: nested antecedent
// clauses count in contract/rule pairs.
int clause_depth(const Clause& c);

// Order-preserving variable renaming per kind; antecedent lists compared in
// order. This is the golden-test equality.
bool alpha_equal(const Clause& a, const Clause& b);

// Multi-line rendering mirroring the forall ... ( ... => ... ) nesting.
std::string print_clause(const Clause& c);

std::string clause_to_json(const Clause& c);
Clause clause_from_json(const std::string& text, const Signature& sig);

}  // namespace incept

#endif
