#pragma once

// Expected-value pushforward through one loop iteration, the moment
// recurrences it induces on monomials, and exact initial moments. Works on
// desugared programs (assignments, draws, weighted choices).
//
// The pushforward processes a statement list in reverse: a simultaneous
// assignment substitutes its right-hand sides, a weighted choice averages
// its branches, and a draw replaces each power of the drawn variable by
// the closed-form moment of its distribution (in terms of the argument
// expressions). By that point every other factor of the term is a
// function of earlier state only, so replacing powers by conditional
// moments is exact.

#include <cstddef>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "loopinvar/deadline.hpp"
#include "loopinvar/frontend.hpp"
#include "loopinvar/polynomial.hpp"

namespace loopinvar {

class MomentContext {
public:
  /// Pre: p is desugared (no if statements remain).
  explicit MomentContext(Program desugared);

  const Program& program() const { return prog_; }
  std::size_t nvars() const { return prog_.vars.size(); }

  /// E[p(next state) | current state] as a polynomial in the current state.
  Polynomial pushforward(const Polynomial& p, const Deadline& dl = {}) const;

  /// The recurrence operator applied to one monomial.
  Polynomial recurrence_of(const Monomial& m, const Deadline& dl = {}) const;

  /// E[p(initial state)] over the initialization section. Variables with
  /// no initializer contribute symbolic atoms (x -> x0, uniquified).
  Scalar initial_moment(const Polynomial& p, const Deadline& dl = {}) const;

  /// Symbolic atom names by variable index (only uninitialized variables
  /// that some initial moment mentioned are guaranteed to be present).
  const std::map<std::size_t, std::string>& init_atoms() const {
    return init_atoms_;
  }

  /// E[X^k] for one draw statement, in terms of its argument expressions.
  Polynomial dist_moment_poly(const Stmt& draw, Exp k, const Deadline& dl = {}) const;

private:
  Polynomial pushforward_stmts(const std::vector<Stmt>& stmts, Polynomial p,
                               const Deadline& dl) const;

  Program prog_;
  std::map<std::size_t, std::string> init_atoms_;

  mutable std::mutex cache_mu_;
  mutable std::map<std::pair<const Stmt*, Exp>, Polynomial> moment_cache_;
};

}  // namespace loopinvar
