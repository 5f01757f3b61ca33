#ifndef INCEPT_ALGEBRA_HPP
#define INCEPT_ALGEBRA_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "incept/clause.hpp"
#include "incept/formula.hpp"
#include "incept/signature.hpp"

namespace incept {

// Finite lattice with one full function table per connective of the closed
// signature. Elements are carrier indices 0..size-1.
struct FiniteLEAlgebra {
  int size = 0;
  std::vector<uint8_t> leqTab;             // size*size, row-major
  std::vector<int> joinTab, meetTab;       // size*size
  int top = 0, bot = 0;
  std::map<std::string, std::vector<int>> ops;  // flat row-major tables

  bool leq(int a, int b) const { return leqTab[a * size + b] != 0; }
  int join(int a, int b) const { return joinTab[a * size + b]; }
  int meet(int a, int b) const { return meetTab[a * size + b]; }
  int apply(const std::string& conn, const std::vector<int>& args) const;
};

using Valuation = std::map<std::string, int>;

int evaluate(const Formula& f, const FiniteLEAlgebra& alg, const Valuation& val);

// Full enumeration over all valuations of the proposition letters.
bool axiom_valid(const Inequality& iq, const FiniteLEAlgebra& alg);

// Evaluates the nested quantified implication; nominals and conominals range
// over all carrier elements.
bool clause_valid(const Clause& c, const FiniteLEAlgebra& alg);
bool clause_valid(const Clause& c, const FiniteLEAlgebra& alg, Valuation& val);

// Number of evaluations axiom_valid would perform; used by the CLI cutoff.
unsigned long long valuation_count(const Inequality& iq, const FiniteLEAlgebra& alg);

// Checks lattice axioms, operator/normality laws and the residuation law of
// every link; empty iff the algebra is a normal LE for the signature.
std::vector<Diagnostic> validate_algebra(const FiniteLEAlgebra& alg,
                                         const Signature& sig);

// Deterministic stream of random normal LE-algebras for a closed signature.
// Lattices are intersection-closed set families; operation tables are
// join/meet-extensions of random values on the coordinatewise irreducibles;
// residual tables are computed as genuine residuals.
class AlgebraStream {
 public:
  AlgebraStream(const Signature& sig, int maxSize, uint64_t seed);
  FiniteLEAlgebra next();

 private:
  const Signature& sig_;
  int maxSize_;
  uint64_t state_;
  uint64_t rnd(uint64_t bound);  // uniform-ish in [0, bound)
};

std::vector<FiniteLEAlgebra> enumerate_algebras(const Signature& sig, int maxSize,
                                                uint64_t seed, int count);

std::string algebra_to_json(const FiniteLEAlgebra& alg);
FiniteLEAlgebra algebra_from_json(const std::string& text);

}  // namespace incept

#endif
