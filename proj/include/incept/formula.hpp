#ifndef INCEPT_FORMULA_HPP
#define INCEPT_FORMULA_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "incept/signature.hpp"

namespace incept {

// Leaves are proposition letters or the special variables introduced by the
// correspondence machinery (interpreted as arbitrary algebra elements).
enum class VarKind : unsigned char { Prop, Nom, Conom };

struct Formula {
  enum class Kind : unsigned char { Atom, Top, Bot, And, Or, Conn };
  Kind kind = Kind::Atom;
  std::string name;        // Atom: variable name; Conn: connective name
  VarKind var = VarKind::Prop;
  std::vector<Formula> args;

  bool operator==(const Formula& o) const;
  bool operator<(const Formula& o) const;

  static Formula atom(std::string n, VarKind k = VarKind::Prop);
  static Formula top();
  static Formula bot();
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula conn(std::string n, std::vector<Formula> as);
};

struct Inequality {
  Formula lhs, rhs;
  bool operator==(const Inequality& o) const {
    return lhs == o.lhs && rhs == o.rhs;
  }
};

struct ParseError : std::runtime_error {
  int pos;
  ParseError(const std::string& msg, int p)
      : std::runtime_error(msg + " at position " + std::to_string(p)), pos(p) {}
};

// Grammar: atoms are lowercase identifiers, connectives apply as name(a, b)
// and binary ones may also be written infix with equal precedence and left
// associativity; "and"/"or"/"top"/"bot" are the lattice constants.
Formula parse_formula(const std::string& text, const Signature& sig);
Inequality parse_inequality(const std::string& text, const Signature& sig);

std::string print_formula(const Formula& f);
std::string print_inequality(const Inequality& iq);

// Free variables of the given kind in first-occurrence order.
std::vector<std::string> variables(const Formula& f, VarKind k);
std::vector<std::string> variables(const Inequality& iq, VarKind k);

void collect_vars(const Formula& f, VarKind k, std::vector<std::string>& out);

// Checks arities and name resolution against a closed signature.
void typecheck(const Formula& f, const Signature& sig);

}  // namespace incept

#endif
