#include "loopinvar/polynomial.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

#include "loopinvar/errors.hpp"

namespace loopinvar {

namespace {

void check_same_space(const Polynomial& a, const Polynomial& b) {
  if (a.nvars() != b.nvars())
    throw Error("polynomial arity mismatch: " + std::to_string(a.nvars()) +
                " vs " + std::to_string(b.nvars()));
}

unsigned as_unsigned_exp(Exp e) {
  if (e > std::numeric_limits<unsigned>::max())
    throw TooLargeError("exponent too large: " + std::to_string(e));
  return static_cast<unsigned>(e);
}

}  // namespace

Exp mono_degree(const Monomial& m) {
  Exp d = 0;
  for (Exp e : m) d += e;
  return d;
}

bool MonoLess::operator()(const Monomial& a, const Monomial& b) const {
  Exp da = mono_degree(a);
  Exp db = mono_degree(b);
  if (da != db) return da < db;
  // Within a degree: descending lexicographic order on the exponent vector.
  return b < a;
}

std::string mono_to_string(const Monomial& m, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += names.at(i);
    if (m[i] > 1) out += "^" + std::to_string(m[i]);
  }
  return out.empty() ? "1" : out;
}

Polynomial Polynomial::constant(std::size_t nvars, const Scalar& c) {
  Polynomial p(nvars);
  p.add_term(Monomial(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t idx, Exp e) {
  if (idx >= nvars) throw Error("variable index out of range");
  Polynomial p(nvars);
  Monomial m(nvars, 0);
  m[idx] = e;
  p.add_term(m, Scalar(1));
  return p;
}

Polynomial Polynomial::monomial(std::size_t nvars, const Monomial& m, const Scalar& c) {
  if (m.size() != nvars) throw Error("monomial arity mismatch");
  Polynomial p(nvars);
  p.add_term(m, c);
  return p;
}

bool Polynomial::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && mono_degree(terms_.begin()->first) == 0;
}

Scalar Polynomial::constant_value() const {
  Monomial one(nvars_, 0);
  auto it = terms_.find(one);
  return it == terms_.end() ? Scalar() : it->second;
}

Polynomial Polynomial::operator-() const {
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  r += o;
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial r = *this;
  r -= o;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_same_space(*this, o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_same_space(*this, o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  check_same_space(*this, o);
  Polynomial r(nvars_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m(nvars_);
      for (std::size_t i = 0; i < nvars_; ++i) m[i] = ma[i] + mb[i];
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::scale(const Scalar& c) const {
  Polynomial r(nvars_);
  if (c.is_zero()) return r;
  for (const auto& [m, k] : terms_) r.terms_.emplace(m, k * c);
  return r;
}

namespace {

void enforce_budget(const Polynomial& p, std::size_t budget) {
  if (budget != 0 && p.term_count() > budget)
    throw BudgetExceededError("polynomial term budget exceeded (" +
                              std::to_string(p.term_count()) + " > " +
                              std::to_string(budget) + " terms)");
}

}  // namespace

Polynomial Polynomial::pow(Exp e, std::size_t term_budget, const Deadline& dl) const {
  Polynomial result = Polynomial::constant(nvars_, Scalar(1));
  if (e == 0) return result;
  Polynomial base = *this;
  // Binary exponentiation; every intermediate product stays within budget.
  while (true) {
    dl.poll();
    if (e & 1) {
      result = result * base;
      enforce_budget(result, term_budget);
    }
    e >>= 1;
    if (e == 0) break;
    base = base * base;
    enforce_budget(base, term_budget);
  }
  return result;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& images,
                                  std::size_t term_budget, const Deadline& dl) const {
  if (images.size() != nvars_) throw Error("substitute: wrong image count");
  for (const auto& im : images) check_same_space(*this, im);
  std::vector<std::map<Exp, Polynomial>> memo(nvars_);
  auto power_of = [&](std::size_t i, Exp e) -> const Polynomial& {
    auto it = memo[i].find(e);
    if (it != memo[i].end()) return it->second;
    Polynomial r = images[i].pow(e, term_budget, dl);
    return memo[i].emplace(e, std::move(r)).first->second;
  };
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) {
    dl.poll();
    Polynomial t = Polynomial::constant(nvars_, c);
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (m[i] == 0) continue;
      t = t * power_of(i, m[i]);
      enforce_budget(t, term_budget);
    }
    out += t;
    enforce_budget(out, term_budget);
  }
  return out;
}

Scalar Polynomial::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar() : it->second;
}

void Polynomial::add_term(const Monomial& m, const Scalar& c) {
  if (m.size() != nvars_) throw Error("monomial arity mismatch");
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Exp Polynomial::degree() const {
  if (terms_.empty()) return 0;
  // Map order is ascending degree, so the last key carries the degree.
  return mono_degree(terms_.rbegin()->first);
}

bool Polynomial::mentions(std::size_t idx) const {
  for (const auto& [m, c] : terms_)
    if (m[idx] != 0) return true;
  return false;
}

Scalar Polynomial::eval(const std::vector<Scalar>& point) const {
  if (point.size() != nvars_) throw Error("eval: wrong point arity");
  Scalar out;
  for (const auto& [m, c] : terms_) {
    Scalar t = c;
    for (std::size_t i = 0; i < nvars_; ++i)
      if (m[i] != 0) t *= point[i].pow(as_unsigned_exp(m[i]));
    out += t;
  }
  return out;
}

std::string Polynomial::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    bool constant_term = mono_degree(m) == 0;
    std::string body;
    bool negative = false;
    if (c.is_rational()) {
      Rational v = c.rational_value();
      negative = v < 0;
      Rational mag = negative ? Rational(-v) : v;
      if (constant_term) {
        body = loopinvar::to_string(mag);
      } else if (mag == 1) {
        body = mono_to_string(m, names);
      } else {
        body = loopinvar::to_string(mag) + "*" + mono_to_string(m, names);
      }
    } else {
      negative = c.num().leading_coeff() < 0;
      std::string cs = (negative ? -c : c).to_string();
      if (constant_term) {
        body = cs;
      } else {
        bool atom = cs.find(' ') == std::string::npos &&
                    cs.find('/') == std::string::npos &&
                    cs.find('*') == std::string::npos;
        body = (atom ? cs : "(" + cs + ")") + "*" + mono_to_string(m, names);
      }
    }
    if (out.empty()) {
      out = negative ? "-" + body : body;
    } else {
      out += negative ? " - " + body : " + " + body;
    }
  }
  return out;
}

Polynomial poly_eval_subst(const Polynomial& p,
                           const std::map<std::size_t, Polynomial>& bindings) {
  std::vector<Polynomial> images;
  images.reserve(p.nvars());
  for (std::size_t i = 0; i < p.nvars(); ++i) {
    auto it = bindings.find(i);
    if (it == bindings.end()) {
      if (p.mentions(i))
        throw MissingBindingError("no binding for variable index " +
                                  std::to_string(i));
      images.push_back(Polynomial::constant(p.nvars(), Scalar()));
    } else {
      images.push_back(it->second);
    }
  }
  return p.substitute(images);
}

}  // namespace loopinvar
