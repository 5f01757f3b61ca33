#ifndef INCEPT_SIGNATURE_HPP
#define INCEPT_SIGNATURE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace incept {

// Coordinate tonicity: Pos is the order-type entry 1, Neg is the dual entry.
enum class Tone : unsigned char { Pos, Neg };

inline Tone flip(Tone t) { return t == Tone::Pos ? Tone::Neg : Tone::Pos; }

// t^e in the usual exponent notation: identity for e = 1, flip for e = dual.
inline Tone tpow(Tone t, Tone e) { return e == Tone::Pos ? t : flip(t); }

using OrderType = std::vector<Tone>;

enum class Family : unsigned char { F, G };

// How a residual in one coordinate is realized: the named connective applied
// to this connective's parent-coordinate-order arguments shuffled by `argOf`.
// Position q of `conn` receives argument argOf[q] of the abstract residual.
struct ResidualLink {
  std::string conn;
  std::vector<int> argOf;
};

struct ConnectiveSpec {
  std::string name;
  Family family = Family::F;
  int arity = 0;
  OrderType orderType;

  // Empty for a primitive, otherwise the (parent, coordinate) this connective
  // was created for; coordinates are 1-based.
  std::string parent;
  int parentCoord = 0;

  // Gaggle bookkeeping: every member of a residual family names its root
  // primitive, which slot of the root relation it outputs (0 = the root's own
  // output), and which slot each argument position holds.
  std::string root;
  int outSlot = 0;
  std::vector<int> slotOfPos;

  // One link per coordinate once the signature is closed (1-based index - 1).
  std::vector<ResidualLink> residuals;

  bool isPrimitive() const { return parent.empty(); }
};

struct Signature {
  // Keyed by connective name; iteration order is the insertion order so that
  // closure output is deterministic.
  std::vector<ConnectiveSpec> connectives;
  // Requested names for generated residuals, keyed by the auto-name they
  // would otherwise get ("<parent>.rres.<k>" / "<parent>.lres.<k>").
  std::map<std::string, std::string> aliases;

  const ConnectiveSpec* find(const std::string& name) const;
  const ConnectiveSpec& at(const std::string& name) const;
  bool has(const std::string& name) const { return find(name) != nullptr; }

  // The order-type of the residual seen through a link (the shuffled view).
  OrderType linkedOrderType(const ResidualLink& link) const;
};

// Auto-generated residual name for the given parent connective and
// (1-based) coordinate.
std::string residual_auto_name(const ConnectiveSpec& parent, int coord);

// Closes the signature under residuals in every coordinate. New connectives
// are created only for first-round residuals of primitives; residuals of
// residuals resolve to existing family members through argument-permuting
// links, so the operation is idempotent.
Signature close_under_residuals(const Signature& sig);

struct Diagnostic {
  std::string path;
  std::string message;
};

// Total check of all signature invariants; empty iff well-formed and closed.
std::vector<Diagnostic> validate_signature(const Signature& sig);

// Canonical JSON serialization of the primitives (+ aliases). Parsing a
// canonical file and reprinting it is the identity.
std::string signature_to_json(const Signature& sig);
Signature signature_from_json(const std::string& text);

}  // namespace incept

#endif
