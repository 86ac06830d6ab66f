#pragma once

// Exact coefficient field: rational functions num/den over the symbolic
// parameters, kept in canonical reduced form. Plain rationals are the
// common case and stay cheap (constant numerator and denominator).

#include <map>
#include <set>
#include <string>

#include "loopinvar/param_poly.hpp"
#include "loopinvar/rational.hpp"

namespace loopinvar {

class Scalar {
public:
  /// Zero.
  Scalar() : num_(), den_(1) {}
  Scalar(long v) : num_(v), den_(1) {}                    // NOLINT
  Scalar(const Integer& v) : num_(v), den_(1) {}          // NOLINT
  Scalar(const Rational& v);                              // NOLINT
  explicit Scalar(const ParamPoly& p) : num_(p), den_(1) {}

  static Scalar param(const std::string& name) {
    return Scalar(ParamPoly::variable(name));
  }
  /// Reduced quotient n/d; throws Error when d is the zero polynomial.
  static Scalar from_ratio(const ParamPoly& n, const ParamPoly& d);

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const;
  /// True when the value is a plain rational (no parameters).
  bool is_rational() const;
  /// The rational value (pre: is_rational()).
  Rational rational_value() const;

  Scalar operator-() const;
  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;  // throws Error on zero divisor
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }
  bool operator==(const Scalar& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  Scalar pow(unsigned e) const;

  void collect_params(std::set<std::string>& out) const {
    num_.collect_params(out);
    den_.collect_params(out);
  }
  bool has_params() const {
    std::set<std::string> ps;
    collect_params(ps);
    return !ps.empty();
  }

  /// Evaluate at rational parameter values; throws Error when the
  /// denominator vanishes at the point.
  Rational specialize(const std::map<std::string, Rational>& vals) const;

  /// Rendering: "p/q" for rationals, "(p + 1)/(2*q)" style otherwise.
  std::string to_string() const;

  const ParamPoly& num() const { return num_; }
  const ParamPoly& den() const { return den_; }

private:
  void reduce();
  ParamPoly num_;
  ParamPoly den_;  // canonical: nonzero, gcd(num,den)=1 (incl. integer
                   // content), graded-lex leading coefficient positive;
                   // num zero => den == 1
};

}  // namespace loopinvar
