#ifndef INCEPT_STRUCTURE_HPP
#define INCEPT_STRUCTURE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "incept/formula.hpp"
#include "incept/rulegen.hpp"

namespace incept {

// One node type covers concrete structures and rule schemas; a structure is
// concrete when no metavariable kinds occur. Formulas are atomic structures
// of either sort.
//   Fml    - formula leaf
//   SConn  - structural connective (hat when F-sort, check when G-sort)
//   STop / SBot - the structural constants
//   Param  - fresh parameter standing for an uninstantiable contract variable
//   SVar   - structure metavariable (schema only)
//   FVar   - formula metavariable (schema only)
//   AtomVar- metavariable for a proposition letter (schema only)
//   FApp   - one-level formula schema: constructor applied to FVar/AtomVar
struct StructNode {
  enum class Kind : unsigned char {
    Fml, SConn, STop, SBot, Param, SVar, FVar, AtomVar, FApp
  };
  Kind kind = Kind::Fml;
  Formula fml;                    // Fml
  std::string name;               // SConn/Param/SVar/FVar/AtomVar/FApp
  bool fsort = true;              // sort of this node where fixed (SConn/Param/SVar/STop/SBot)
  std::vector<StructNode> args;   // SConn/FApp

  bool operator==(const StructNode& o) const;

  static StructNode formula(Formula f);
  static StructNode sconn(std::string n, bool fsort, std::vector<StructNode> as);
  static StructNode stop();
  static StructNode sbot();
  static StructNode param(std::string id, bool fsort);
  static StructNode svar(std::string n, bool fsort);
  static StructNode fvar(std::string n);
  static StructNode atomvar(std::string n);
  static StructNode fapp(std::string ctor, std::vector<StructNode> as);

  bool isConcrete() const;
};

struct DSequent {
  StructNode ante, succ;
  bool operator==(const DSequent& o) const {
    return ante == o.ante && succ == o.succ;
  }
  bool operator<(const DSequent& o) const;
};

// Position inside a sequent: side + child indices.
struct OccPath {
  bool inAnte = true;
  std::vector<int> path;
  bool operator==(const OccPath& o) const {
    return inAnte == o.inAnte && path == o.path;
  }
  bool operator<(const OccPath& o) const {
    return std::tie(inAnte, path) < std::tie(o.inAnte, o.path);
  }
};

const StructNode* node_at(const DSequent& s, const OccPath& p);
DSequent replace_at(const DSequent& s, const OccPath& p, const StructNode& n);

// Precedent/succedent position of an occurrence (sign through the sorts).
bool precedent_position(const DSequent& s, const OccPath& p);

// Well-sortedness against a closed signature; formulas may sit at either sort.
std::vector<Diagnostic> check_sorts(const DSequent& s, const Signature& sig);

std::string print_struct(const StructNode& n);
std::string print_dsequent(const DSequent& s);
StructNode parse_struct(const std::string& text, const Signature& sig, bool fsort);
DSequent parse_dsequent(const std::string& text, const Signature& sig);

// The formula a structure abbreviates: structural connectives become their
// logical counterparts. Params are rejected.
Formula structure_to_formula(const StructNode& n, const Signature& sig);

// MStruct (rule schema side) -> StructNode schema with uninstantiable names.
StructNode schema_from_mstruct(const MStruct& m);

}  // namespace incept

#endif
