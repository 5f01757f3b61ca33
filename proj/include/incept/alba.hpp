#ifndef INCEPT_ALBA_HPP
#define INCEPT_ALBA_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "incept/clause.hpp"
#include "incept/signedtree.hpp"

namespace incept {

struct AlbaStep {
  std::string kind;    // first-approx | solve | ackermann | unravel
  std::string detail;
  Clause snapshot;     // state after the step
};

struct AlbaState {
  Clause clause;
  std::map<std::string, Tone> epsilon;   // eliminable variables
  std::vector<std::string> elimOrder;    // chosen linearization
  int nomCounter = 0;
  int conomCounter = 0;
  std::vector<AlbaStep> trace;

  std::string freshNom() { return "i" + std::to_string(nomCounter++); }
  std::string freshConom() { return "m" + std::to_string(conomCounter++); }
};

// First approximation with immediate skeleton approximation: the goal becomes
// a pure definite Skeleton inequality and every maximal PIA subtree (and every
// atom) is cut off behind a fresh nominal/conominal.
AlbaState first_approximation(const Inequality& iq, const Certificate& cert,
                              const Signature& sig);

struct SolveResult {
  // bounds on the target variable, each either (term <= p) or (p <= term)
  std::vector<PureIneq> bounds;
  // p-free side constraints produced by lattice splits along the way
  std::vector<PureIneq> residues;
};

// Residuation/adjunction steps peeling the constraint until the variable is
// alone on one side. Throws when the variable is not displayable.
SolveResult solve_for_variable(const PureIneq& iq, const std::string& p,
                               const Signature& sig);

// Solves every constraint carrying p in the polarity the Ackermann rule
// eliminates, substitutes the join/meet of the bounds elsewhere, drops the
// solved constraints. Throws on polarity violations.
void ackermann_eliminate(AlbaState& st, const std::string& p, const Signature& sig);

// One unravel step on the outermost offending inequality; false if none.
bool unravel_step(AlbaState& st, const Signature& sig);

bool is_polarity_safe(const Clause& c, const Signature& sig);

struct AlbaRun {
  std::vector<Clause> components;       // one polarity-safe clause each
  std::vector<AlbaStep> trace;
  Certificate certificate;
};

AlbaRun run_alba(const Inequality& iq, const Signature& sig);

}  // namespace incept

#endif
