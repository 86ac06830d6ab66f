#include "loopinvar/unipoly.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "loopinvar/errors.hpp"

namespace loopinvar {

UniPoly::UniPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  trim();
}

UniPoly UniPoly::constant(const Rational& c) { return UniPoly({c}); }

void UniPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational UniPoly::coeff(std::size_t i) const {
  return i < coeffs_.size() ? coeffs_[i] : Rational(0);
}

Rational UniPoly::eval(const Rational& x) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
  std::vector<Rational> c(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) c[i] += o.coeffs_[i];
  return UniPoly(std::move(c));
}

UniPoly UniPoly::operator-(const UniPoly& o) const {
  return *this + o.scale(Rational(-1));
}

UniPoly UniPoly::operator*(const UniPoly& o) const {
  if (coeffs_.empty() || o.coeffs_.empty()) return UniPoly();
  std::vector<Rational> c(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
      c[i + j] += coeffs_[i] * o.coeffs_[j];
  return UniPoly(std::move(c));
}

UniPoly UniPoly::scale(const Rational& c) const {
  if (c == 0) return UniPoly();
  std::vector<Rational> r = coeffs_;
  for (auto& v : r) v *= c;
  return UniPoly(std::move(r));
}

std::pair<UniPoly, Rational> UniPoly::synthetic_divide(const Rational& r) const {
  if (coeffs_.empty()) return {UniPoly(), Rational(0)};
  std::vector<Rational> q(coeffs_.size() - 1, Rational(0));
  Rational carry = coeffs_.back();
  for (std::size_t i = coeffs_.size() - 1; i > 0; --i) {
    q[i - 1] = carry;
    carry = carry * r + coeffs_[i - 1];
  }
  return {UniPoly(std::move(q)), carry};
}

namespace {

/// Distinct candidate values p/q with p dividing |a0| and q dividing |an|,
/// both signs, for the rational root theorem.
std::vector<Rational> root_candidates(const Integer& a0, const Integer& an) {
  std::set<Rational> out;
  for (const Integer& p : divisors(a0)) {
    for (const Integer& q : divisors(an)) {
      Rational r(p, q);
      r.canonicalize();
      out.insert(r);
      out.insert(Rational(-r));
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace

RootList rational_roots(const UniPoly& p) {
  if (p.is_zero()) throw Error("rational_roots: zero polynomial");
  RootList out;

  // Factor out x^m first: root 0 with multiplicity m.
  std::size_t m = 0;
  while (p.coeff(m) == 0) ++m;
  std::vector<Rational> shifted(p.coeffs().begin() + static_cast<long>(m),
                                p.coeffs().end());
  UniPoly cur{std::move(shifted)};
  if (m > 0) out.roots.emplace_back(Rational(0), static_cast<unsigned>(m));

  if (cur.degree() >= 1) {
    // Integer image: clear denominators (roots are unchanged).
    Integer scale(1);
    for (const auto& c : cur.coeffs())
      scale = scale / gcd(scale, Integer(c.get_den())) * Integer(c.get_den());
    Integer a0 = Integer(Rational(cur.coeffs().front() * scale).get_num());
    Integer an = Integer(Rational(cur.coeffs().back() * scale).get_num());

    for (const Rational& cand : root_candidates(a0, an)) {
      if (cur.degree() < 1) break;
      unsigned mult = 0;
      while (cur.eval(cand) == 0) {
        cur = cur.synthetic_divide(cand).first;
        ++mult;
      }
      if (mult > 0) out.roots.emplace_back(cand, mult);
    }
  }

  std::sort(out.roots.begin(), out.roots.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  out.residual = cur;
  return out;
}

SUniPoly::SUniPoly(std::vector<Scalar> coeffs) : coeffs_(std::move(coeffs)) {
  trim();
}

SUniPoly SUniPoly::from_rational(const UniPoly& p) {
  std::vector<Scalar> c;
  c.reserve(p.coeffs().size());
  for (const auto& v : p.coeffs()) c.emplace_back(v);
  return SUniPoly(std::move(c));
}

void SUniPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Scalar SUniPoly::coeff(std::size_t i) const {
  return i < coeffs_.size() ? coeffs_[i] : Scalar();
}

Scalar SUniPoly::eval(const Scalar& x) const {
  Scalar acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

SUniPoly SUniPoly::operator+(const SUniPoly& o) const {
  std::vector<Scalar> c(std::max(coeffs_.size(), o.coeffs_.size()));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) c[i] += o.coeffs_[i];
  return SUniPoly(std::move(c));
}

SUniPoly SUniPoly::operator-(const SUniPoly& o) const {
  return *this + o.scale(Scalar(-1));
}

SUniPoly SUniPoly::scale(const Scalar& c) const {
  if (c.is_zero()) return SUniPoly();
  std::vector<Scalar> r = coeffs_;
  for (auto& v : r) v *= c;
  return SUniPoly(std::move(r));
}

SUniPoly SUniPoly::mul_linear(const Scalar& c) const {
  if (coeffs_.empty()) return SUniPoly();
  std::vector<Scalar> r(coeffs_.size() + 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    r[i + 1] += coeffs_[i];
    r[i] -= coeffs_[i] * c;
  }
  return SUniPoly(std::move(r));
}

bool SUniPoly::has_params() const {
  for (const auto& c : coeffs_)
    if (!c.is_rational()) return true;
  return false;
}

UniPoly SUniPoly::to_rational() const {
  std::vector<Rational> c;
  c.reserve(coeffs_.size());
  for (const auto& v : coeffs_) c.push_back(v.rational_value());
  return UniPoly(std::move(c));
}

std::pair<SUniPoly, Scalar> SUniPoly::synthetic_divide(const Scalar& r) const {
  if (coeffs_.empty()) return {SUniPoly(), Scalar()};
  std::vector<Scalar> q(coeffs_.size() - 1);
  Scalar carry = coeffs_.back();
  for (std::size_t i = coeffs_.size() - 1; i > 0; --i) {
    q[i - 1] = carry;
    carry = carry * r + coeffs_[i - 1];
  }
  return {SUniPoly(std::move(q)), carry};
}

SRootList rational_roots(const SUniPoly& p) {
  if (p.is_zero()) throw Error("rational_roots: zero polynomial");
  if (!p.has_params()) {
    RootList plain = rational_roots(p.to_rational());
    return {plain.roots, SUniPoly::from_rational(plain.residual)};
  }

  std::set<std::string> params;
  for (const auto& c : p.coeffs()) c.collect_params(params);

  // Candidate roots: intersect the rational roots of several parameter
  // specializations. A parameter-free root survives every specialization,
  // so the intersection is complete; spurious members are removed below by
  // exact division.
  std::optional<std::set<Rational>> candidates;
  int successes = 0;
  for (int seed = 0; seed < 24 && successes < 5; ++seed) {
    std::map<std::string, Rational> vals;
    long k = 0;
    for (const auto& name : params) {
      vals[name] = Rational(3 + 2 * seed + 5 * k, 1 + (seed % 3));
      ++k;
    }
    std::vector<Rational> spec;
    spec.reserve(p.coeffs().size());
    bool ok = true;
    for (const auto& c : p.coeffs()) {
      try {
        spec.push_back(c.specialize(vals));
      } catch (const Error&) {
        ok = false;  // denominator vanished at this sample point
        break;
      }
    }
    if (!ok) continue;
    UniPoly sp{std::move(spec)};
    if (sp.is_zero()) continue;
    std::set<Rational> here;
    for (const auto& [r, mult] : rational_roots(sp).roots) here.insert(r);
    if (!candidates) {
      candidates = std::move(here);
    } else {
      std::set<Rational> both;
      std::set_intersection(candidates->begin(), candidates->end(), here.begin(),
                            here.end(), std::inserter(both, both.begin()));
      candidates = std::move(both);
    }
    ++successes;
  }

  SRootList out;
  SUniPoly cur = p;
  if (candidates) {
    std::vector<Rational> sorted(candidates->begin(), candidates->end());
    std::sort(sorted.begin(), sorted.end());
    for (const Rational& cand : sorted) {
      unsigned mult = 0;
      while (cur.degree() >= 1) {
        auto [q, rem] = cur.synthetic_divide(Scalar(cand));
        if (!rem.is_zero()) break;
        cur = std::move(q);
        ++mult;
      }
      if (mult > 0) out.roots.emplace_back(cand, mult);
    }
  }
  out.residual = cur;
  return out;
}

}  // namespace loopinvar
