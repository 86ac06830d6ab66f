#pragma once

// Multivariate polynomials with integer coefficients over named symbolic
// parameters. These are the building blocks of the exact coefficient field:
// Scalar values are quotients of two ParamPoly. Parameters cover program
// parameters, symbolic initial values (x0, ...), and free basis weights.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "loopinvar/rational.hpp"

namespace loopinvar {

/// Power product of parameters, name -> exponent (exponents > 0 only).
using PMonomial = std::map<std::string, unsigned>;

/// Total degree of a parameter monomial.
unsigned pmono_degree(const PMonomial& m);

/// Graded-lexicographic strict order (degree first, then lex on names).
bool pmono_graded_less(const PMonomial& a, const PMonomial& b);

class ParamPoly {
public:
  ParamPoly() = default;
  ParamPoly(long c);                  // NOLINT: implicit by design
  ParamPoly(const Integer& c);        // NOLINT: implicit by design
  static ParamPoly variable(const std::string& name, unsigned exp = 1);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant term (the whole value when is_constant()).
  Integer constant_value() const;

  ParamPoly operator-() const;
  ParamPoly operator+(const ParamPoly& o) const;
  ParamPoly operator-(const ParamPoly& o) const;
  ParamPoly operator*(const ParamPoly& o) const;
  ParamPoly& operator+=(const ParamPoly& o);
  ParamPoly& operator-=(const ParamPoly& o);
  ParamPoly& operator*=(const ParamPoly& o);
  bool operator==(const ParamPoly& o) const { return terms_ == o.terms_; }
  bool operator!=(const ParamPoly& o) const { return !(*this == o); }
  /// Arbitrary total order (for use as a map key).
  bool operator<(const ParamPoly& o) const { return terms_ < o.terms_; }

  ParamPoly pow(unsigned e) const;

  /// Total degree; 0 for constants (and for the zero polynomial).
  unsigned degree() const;
  /// Degree in one parameter.
  unsigned degree_in(const std::string& name) const;

  /// Gcd of all integer coefficients (0 for the zero polynomial), positive.
  Integer int_content() const;
  /// Leading coefficient under the graded-lex term order.
  Integer leading_coeff() const;
  /// Leading monomial under the graded-lex term order (pre: nonzero).
  const PMonomial& leading_monomial() const;

  /// Exact division; throws Error when the divisor does not divide exactly.
  ParamPoly divide_exact(const ParamPoly& d) const;
  /// Exact division that reports failure instead of throwing.
  std::optional<ParamPoly> try_divide(const ParamPoly& d) const;
  /// Divide every coefficient by an integer that divides the content exactly.
  ParamPoly divide_int(const Integer& d) const;

  /// Polynomial gcd (content * primitive-part PRS), sign-normalized so the
  /// graded-lex leading coefficient is positive. gcd(0, b) = +-b, gcd(0,0)=0.
  static ParamPoly gcd(const ParamPoly& a, const ParamPoly& b);

  void collect_params(std::set<std::string>& out) const;
  bool mentions(const std::string& name) const;

  /// Evaluate at rational parameter values; every parameter that occurs
  /// must be present in the map.
  Rational specialize(const std::map<std::string, Rational>& vals) const;

  /// Human-readable rendering, terms in descending graded-lex order,
  /// e.g. "2*p*q^2 - 3". The zero polynomial renders as "0".
  std::string to_string() const;

  const std::map<PMonomial, Integer>& terms() const { return terms_; }

  /// Number of terms.
  std::size_t size() const { return terms_.size(); }

  /// Add c * m into this polynomial, cancelling a zero result.
  void add_term(const PMonomial& m, const Integer& c);

private:
  std::map<PMonomial, Integer> terms_;  // invariant: no zero coefficients
};

/// A common divisor of the given nonzero polynomials: the result always
/// divides every input exactly. Cheap modular probes decide whether a
/// nontrivial polynomial part is worth extracting, so in rare cases the
/// result may be a proper divisor of the true gcd. Use only where exact
/// divisibility (not maximality) matters, e.g. row scaling.
ParamPoly probable_common_divisor(const std::vector<const ParamPoly*>& ps);

}  // namespace loopinvar
