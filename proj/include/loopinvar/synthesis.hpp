#pragma once

// Synthesis of polynomial moment invariants over the defective variables.
// A candidate combination S of defective monomials qualifies when applying
// the recurrence operator gives R[S] = kappa * S + (effective part): the
// coefficients outside the candidate list that still touch a defective
// variable must cancel, and the candidate part must be an eigenvector.
// Each rational eigenvalue kappa yields a solution space; combining any
// member with the closed form of its effective remainder produces an
// exponential-polynomial closed form for E[S(n)].

#include <cstddef>
#include <string>
#include <vector>

#include "loopinvar/cfinite.hpp"
#include "loopinvar/deadline.hpp"
#include "loopinvar/dependency.hpp"
#include "loopinvar/exp_poly.hpp"
#include "loopinvar/linalg.hpp"
#include "loopinvar/moments.hpp"
#include "loopinvar/polynomial.hpp"

namespace loopinvar {

/// Which monomials are eligible as candidates (degree 1..d either way):
///  - Pure: only defective variables appear;
///  - Full: at least one defective variable appears.
enum class CandMode { Pure, Full };

/// Candidate monomials in canonical listing order.
/// Throws NoDefectiveVariablesError when the defective set is empty.
std::vector<Monomial> candidate_monomials(std::size_t nvars, const Partition& part,
                                          Exp d, CandMode mode);

/// Number of candidate monomials, computed combinatorially.
std::size_t candidate_count(std::size_t nvars, const Partition& part, Exp d,
                            CandMode mode);

struct ConstraintSystem {
  std::vector<Monomial> candidate;
  /// a_cand(i, j) = coefficient of candidate[i] in R[candidate[j]].
  SMat a_cand;
  /// Monomials outside the candidate list that touch a defective variable;
  /// their coefficients must vanish. a_extra(i, j) = coefficient of
  /// extra[i] in R[candidate[j]].
  std::vector<Monomial> extra;
  SMat a_extra;
  /// Per candidate j: the effective-only part of R[candidate[j]]
  /// (constants included).
  std::vector<Polynomial> effective_parts;
};

ConstraintSystem constraint_matrices(const MomentContext& ctx, const Partition& part,
                                     Exp d, CandMode mode, const Deadline& dl = {});

struct SolutionSpace {
  Rational kappa;
  /// Canonical basis; each vector lists coefficients over the candidates.
  std::vector<SVec> basis;
};

/// All solution spaces with rational eigenvalue, kappa ascending; empty
/// spaces are dropped.
std::vector<SolutionSpace> solve_solution_space(const ConstraintSystem& sys,
                                                const Deadline& dl = {});

struct Invariant {
  Exp degree = 1;
  Rational kappa;
  /// Coefficients over the candidate list; symbolic in the weights when
  /// the solution space has dimension > 1.
  SVec coefficients;
  std::vector<std::string> weights;
  /// S as a polynomial in the program variables.
  Polynomial s_poly{0};
  /// E[S(0)] in terms of parameters and initial-value atoms.
  Scalar initial_value;
  ExpPoly closed_form;
  unsigned valid_from = 0;
  std::size_t space_dim = 1;
  /// True for probabilistic programs (the form gives an expectation),
  /// false for deterministic ones (an exact value).
  bool expectation = false;
};

struct SynthesisResult {
  Exp degree = 1;
  Partition partition;
  std::vector<Monomial> candidate;
  std::size_t equation_count = 0;
  std::vector<SolutionSpace> spaces;
  /// One invariant per solution space, kappa ascending.
  std::vector<Invariant> invariants;
  /// True when some solution has a nonzero coefficient on a monomial of
  /// total degree exactly the requested degree.
  bool has_exact_degree = false;
};

/// End-to-end synthesis at one degree. Throws NoDefectiveVariablesError
/// when the program has no defective variables.
SynthesisResult synthesize(const MomentContext& ctx, Exp d,
                           CandMode mode = CandMode::Pure, const Deadline& dl = {});

}  // namespace loopinvar
