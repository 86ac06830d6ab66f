#include "loopinvar/scalar.hpp"

#include "loopinvar/errors.hpp"

namespace loopinvar {

Scalar::Scalar(const Rational& v) : num_(v.get_num()), den_(v.get_den()) {}

Scalar Scalar::from_ratio(const ParamPoly& n, const ParamPoly& d) {
  if (d.is_zero()) throw Error("Scalar with zero denominator");
  Scalar s;
  s.num_ = n;
  s.den_ = d;
  s.reduce();
  return s;
}

void Scalar::reduce() {
  if (num_.is_zero()) {
    den_ = ParamPoly(1);
    return;
  }
  ParamPoly g = ParamPoly::gcd(num_, den_);
  if (!(g.is_constant() && g.constant_value() == 1)) {
    num_ = num_.divide_exact(g);
    den_ = den_.divide_exact(g);
  }
  if (den_.leading_coeff() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
}

bool Scalar::is_one() const {
  return num_.is_constant() && !num_.is_zero() && num_.constant_value() == 1 &&
         den_.is_constant() && den_.constant_value() == 1;
}

bool Scalar::is_rational() const {
  return num_.is_constant() && den_.is_constant();
}

Rational Scalar::rational_value() const {
  if (!is_rational()) throw Error("rational_value on parametric Scalar");
  if (num_.is_zero()) return 0;
  Rational r(num_.constant_value(), den_.constant_value());
  r.canonicalize();
  return r;
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.num_ = -r.num_;
  return r;
}

Scalar Scalar::operator+(const Scalar& o) const {
  Scalar r;
  if (den_ == o.den_) {
    r.num_ = num_ + o.num_;
    r.den_ = den_;
  } else {
    r.num_ = num_ * o.den_ + o.num_ * den_;
    r.den_ = den_ * o.den_;
  }
  r.reduce();
  return r;
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
  if (is_zero() || o.is_zero()) return Scalar();
  // Cross-reduce before multiplying to keep intermediates small.
  ParamPoly g1 = ParamPoly::gcd(num_, o.den_);
  ParamPoly g2 = ParamPoly::gcd(o.num_, den_);
  ParamPoly n1 = num_.divide_exact(g1);
  ParamPoly d2 = o.den_.divide_exact(g1);
  ParamPoly n2 = o.num_.divide_exact(g2);
  ParamPoly d1 = den_.divide_exact(g2);
  Scalar r;
  r.num_ = n1 * n2;
  r.den_ = d1 * d2;
  r.reduce();
  return r;
}

Scalar Scalar::operator/(const Scalar& o) const {
  if (o.is_zero()) throw Error("Scalar division by zero");
  Scalar inv;
  inv.num_ = o.den_;
  inv.den_ = o.num_;
  if (inv.den_.leading_coeff() < 0) {
    inv.num_ = -inv.num_;
    inv.den_ = -inv.den_;
  }
  return *this * inv;
}

Scalar Scalar::pow(unsigned e) const {
  Scalar acc(1);
  Scalar base = *this;
  while (e > 0) {
    if (e & 1u) acc *= base;
    e >>= 1u;
    if (e > 0) base *= base;
  }
  return acc;
}

Rational Scalar::specialize(const std::map<std::string, Rational>& vals) const {
  Rational d = den_.specialize(vals);
  if (d == 0) throw Error("Scalar specialization hit a vanishing denominator");
  return num_.specialize(vals) / d;
}

std::string Scalar::to_string() const {
  std::string n = num_.to_string();
  if (den_.is_constant() && den_.constant_value() == 1) return n;
  if (num_.size() > 1) n = "(" + n + ")";
  std::string d = den_.to_string();
  if (den_.size() > 1 || d.find('*') != std::string::npos ||
      d.find('^') != std::string::npos) {
    d = "(" + d + ")";
  }
  return n + "/" + d;
}

}  // namespace loopinvar
