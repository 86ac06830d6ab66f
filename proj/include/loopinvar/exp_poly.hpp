#pragma once

// Exponential polynomials: finite sums of P_k(n) * base_k^n with rational
// bases and Scalar polynomial coefficients in n. These are the closed
// forms the tool produces. The convention for base 0 is 0^n = [n = 0]
// (so 0^0 = 1), which makes delta corrections at n = 0 expressible.
// Also here: the exact solver for S(n+1) = kappa * S(n) + h(n).

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "loopinvar/rational.hpp"
#include "loopinvar/scalar.hpp"

namespace loopinvar {

/// Polynomial in n with Scalar coefficients, ascending, no trailing zeros.
using NPoly = std::vector<Scalar>;

NPoly npoly_trim(NPoly p);
NPoly npoly_add(const NPoly& a, const NPoly& b);
NPoly npoly_scale(const NPoly& a, const Scalar& c);
NPoly npoly_mul(const NPoly& a, const NPoly& b);
/// P(n + d) for integer d.
NPoly npoly_shift(const NPoly& p, long d);
Scalar npoly_eval(const NPoly& p, const Scalar& n);

struct ExpTerm {
  Rational base;
  NPoly coeff;
};

class ExpPoly {
public:
  ExpPoly() = default;
  static ExpPoly constant(const Scalar& c);
  /// c * base^n.
  static ExpPoly geometric(const Rational& base, const Scalar& c);
  static ExpPoly term(const Rational& base, NPoly coeff);

  bool is_zero() const { return terms_.empty(); }
  /// Terms in canonical order: |base| descending, then base ascending.
  const std::vector<ExpTerm>& terms() const { return terms_; }
  /// Coefficient polynomial attached to a base (empty when absent).
  NPoly coeff_of(const Rational& base) const;

  ExpPoly operator+(const ExpPoly& o) const;
  ExpPoly operator-(const ExpPoly& o) const;
  ExpPoly operator*(const ExpPoly& o) const;
  ExpPoly scale(const Scalar& c) const;
  bool operator==(const ExpPoly& o) const;
  bool operator!=(const ExpPoly& o) const { return !(*this == o); }

  Scalar eval(unsigned long n) const;

  /// The same function for n >= 1: the base-0 term removed.
  ExpPoly strip_base0() const;
  bool has_base0() const;

  /// Rendering such as "2^n*(x0 + y0 + 2) - (-1)^n/2 - 3/2"; "0" when zero.
  std::string to_string() const;

private:
  void add_term(const Rational& base, const NPoly& coeff);
  std::vector<ExpTerm> terms_;  // canonical: ordered, nonzero coeffs,
                                // base-0 coeff truncated to a constant
};

struct FirstOrderSolution {
  ExpPoly form;
  unsigned valid_from = 0;
};

/// Exact solution of S(n+1) = kappa * S(n) + h(n) with S(0) = s0, valid
/// from 0 except in the one unrepresentable corner (kappa = 0 with a
/// base-0 contribution in h, whose [n = 1] spike forces valid_from = 2).
FirstOrderSolution solve_first_order(const Rational& kappa, const ExpPoly& h,
                                     const Scalar& s0);

/// Anchored variant: the recurrence and the h formula hold for
/// n >= h_valid_from, and anchor = S(h_valid_from).
FirstOrderSolution solve_first_order_from(const Rational& kappa, const ExpPoly& h,
                                          unsigned h_valid_from,
                                          const Scalar& anchor);

}  // namespace loopinvar
