#pragma once

// Univariate polynomials as dense ascending coefficient vectors, over the
// rationals and over the Scalar field, plus exact rational root finding.
// Characteristic polynomials of closure systems land here; their rational
// roots are the closed-form bases.

#include <cstddef>
#include <utility>
#include <vector>

#include "loopinvar/rational.hpp"
#include "loopinvar/scalar.hpp"

namespace loopinvar {

/// coeffs[i] multiplies x^i; no trailing zeros (zero polynomial = empty).
class UniPoly {
public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coeffs);
  static UniPoly constant(const Rational& c);

  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  Rational coeff(std::size_t i) const;

  Rational eval(const Rational& x) const;

  UniPoly operator+(const UniPoly& o) const;
  UniPoly operator-(const UniPoly& o) const;
  UniPoly operator*(const UniPoly& o) const;
  UniPoly scale(const Rational& c) const;
  bool operator==(const UniPoly& o) const { return coeffs_ == o.coeffs_; }
  bool operator!=(const UniPoly& o) const { return !(*this == o); }

  /// Division by (x - r): quotient and the constant remainder p(r).
  std::pair<UniPoly, Rational> synthetic_divide(const Rational& r) const;

private:
  void trim();
  std::vector<Rational> coeffs_;
};

struct RootList {
  /// Rational roots with multiplicities, ascending by value.
  std::vector<std::pair<Rational, unsigned>> roots;
  /// Factor left after dividing the rational roots out; constant exactly
  /// when the polynomial splits over Q.
  UniPoly residual;
};

/// All rational roots of a nonzero polynomial, with multiplicities.
RootList rational_roots(const UniPoly& p);

/// Univariate polynomial over the Scalar field (parametric coefficients).
class SUniPoly {
public:
  SUniPoly() = default;
  explicit SUniPoly(std::vector<Scalar> coeffs);
  static SUniPoly from_rational(const UniPoly& p);

  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Scalar>& coeffs() const { return coeffs_; }
  Scalar coeff(std::size_t i) const;
  Scalar eval(const Scalar& x) const;
  SUniPoly operator+(const SUniPoly& o) const;
  SUniPoly operator-(const SUniPoly& o) const;
  bool operator==(const SUniPoly& o) const { return coeffs_ == o.coeffs_; }
  bool operator!=(const SUniPoly& o) const { return !(*this == o); }
  SUniPoly scale(const Scalar& c) const;
  /// (x - c) * p, the characteristic-polynomial building block.
  SUniPoly mul_linear(const Scalar& c) const;
  bool has_params() const;
  /// Rational image (pre: !has_params()).
  UniPoly to_rational() const;
  std::pair<SUniPoly, Scalar> synthetic_divide(const Scalar& r) const;

private:
  void trim();
  std::vector<Scalar> coeffs_;
};

struct SRootList {
  std::vector<std::pair<Rational, unsigned>> roots;
  SUniPoly residual;
};

/// Parameter-free rational roots of a nonzero parametric polynomial:
/// candidates come from intersecting the rational roots of several
/// parameter specializations; each survivor is then verified by exact
/// synthetic division over the Scalar field, so the result is sound for
/// every parameter value.
SRootList rational_roots(const SUniPoly& p);

}  // namespace loopinvar
