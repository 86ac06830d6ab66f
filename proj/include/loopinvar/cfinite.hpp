#pragma once

// Moment-closure systems over the effective variables and their exact
// closed forms. Repeatedly applying the recurrence operator to a set of
// effective monomials closes it into a finite linear system
// M(n+1) = A M(n); its solutions are exponential polynomials over the
// rational eigenvalues of A. Irrational or complex contributions are
// reported as unsupported rather than approximated.

#include <cstddef>
#include <vector>

#include "loopinvar/deadline.hpp"
#include "loopinvar/dependency.hpp"
#include "loopinvar/exp_poly.hpp"
#include "loopinvar/linalg.hpp"
#include "loopinvar/moments.hpp"
#include "loopinvar/polynomial.hpp"

namespace loopinvar {

struct ClosureSystem {
  /// Closure members in discovery order; the constant monomial, when it
  /// appears, is kept last.
  std::vector<Monomial> monomials;
  /// Action matrix: row i lists the coefficients of R[monomials[i]] over
  /// the closure members, so E[m(n+1)] = matrix * E[m(n)].
  SMat matrix;
  /// Exact initial moments E[m(0)].
  SVec init;

  std::size_t dim() const { return monomials.size(); }
};

/// Closes the seed monomials under the recurrence operator. Every monomial
/// must stay within the effective variables (DefectiveLeakError otherwise);
/// more than budget members raises ClosureBudgetExceeded.
ClosureSystem moment_closure(const MomentContext& ctx,
                             const std::vector<Monomial>& seeds,
                             const Partition& part, std::size_t budget = 5000,
                             const Deadline& dl = {});

struct ClosedForm {
  ExpPoly form;
  /// First n for which the form is claimed; 0 in all but transient corners.
  unsigned valid_from = 0;
};

/// Closed form of every closure member, index-aligned with
/// sys.monomials. The contributing spectrum must be rational
/// (UnsupportedSpectrumError otherwise).
std::vector<ClosedForm> closed_forms(const ClosureSystem& sys,
                                     const Deadline& dl = {});

/// Closed form of E[p(state at n)] for a polynomial over the effective
/// variables.
ClosedForm closed_form_of_polynomial(const MomentContext& ctx, const Polynomial& p,
                                     const Partition& part,
                                     std::size_t budget = 5000,
                                     const Deadline& dl = {});

}  // namespace loopinvar
