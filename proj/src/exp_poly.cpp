#include "loopinvar/exp_poly.hpp"

#include <algorithm>

#include "loopinvar/errors.hpp"

namespace loopinvar {

NPoly npoly_trim(NPoly p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}

NPoly npoly_add(const NPoly& a, const NPoly& b) {
  NPoly out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return npoly_trim(std::move(out));
}

NPoly npoly_scale(const NPoly& a, const Scalar& c) {
  if (c.is_zero()) return {};
  NPoly out = a;
  for (auto& v : out) v *= c;
  return npoly_trim(std::move(out));
}

NPoly npoly_mul(const NPoly& a, const NPoly& b) {
  if (a.empty() || b.empty()) return {};
  NPoly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return npoly_trim(std::move(out));
}

NPoly npoly_shift(const NPoly& p, long d) {
  if (d == 0) return npoly_trim(p);
  NPoly out(p.size());
  Rational dr(d);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].is_zero()) continue;
    for (std::size_t j = 0; j <= i; ++j) {
      Rational w = Rational(binomial(i, j)) * pow_rational(dr, i - j);
      out[j] += p[i] * Scalar(w);
    }
  }
  return npoly_trim(std::move(out));
}

Scalar npoly_eval(const NPoly& p, const Scalar& n) {
  Scalar acc;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * n + *it;
  return acc;
}

namespace {

/// Canonical term order: |base| descending, then base ascending.
bool base_before(const Rational& a, const Rational& b) {
  Rational aa = abs(a);
  Rational ab = abs(b);
  if (aa != ab) return aa > ab;
  return a < b;
}

}  // namespace

ExpPoly ExpPoly::constant(const Scalar& c) { return term(Rational(1), {c}); }

ExpPoly ExpPoly::geometric(const Rational& base, const Scalar& c) {
  return term(base, {c});
}

ExpPoly ExpPoly::term(const Rational& base, NPoly coeff) {
  ExpPoly p;
  p.add_term(base, npoly_trim(std::move(coeff)));
  return p;
}

void ExpPoly::add_term(const Rational& base, const NPoly& coeff) {
  NPoly c = npoly_trim(coeff);
  if (base == 0 && c.size() > 1) c.resize(1);  // n^i * 0^n vanishes for i >= 1
  c = npoly_trim(std::move(c));
  if (c.empty()) return;
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), base,
      [](const ExpTerm& t, const Rational& b) { return base_before(t.base, b); });
  if (it != terms_.end() && it->base == base) {
    it->coeff = npoly_add(it->coeff, c);
    if (it->coeff.empty()) terms_.erase(it);
  } else {
    terms_.insert(it, ExpTerm{base, std::move(c)});
  }
}

NPoly ExpPoly::coeff_of(const Rational& base) const {
  for (const auto& t : terms_)
    if (t.base == base) return t.coeff;
  return {};
}

ExpPoly ExpPoly::operator+(const ExpPoly& o) const {
  ExpPoly r = *this;
  for (const auto& t : o.terms_) r.add_term(t.base, t.coeff);
  return r;
}

ExpPoly ExpPoly::operator-(const ExpPoly& o) const {
  return *this + o.scale(Scalar(-1));
}

ExpPoly ExpPoly::operator*(const ExpPoly& o) const {
  ExpPoly r;
  for (const auto& a : terms_)
    for (const auto& b : o.terms_)
      r.add_term(a.base * b.base, npoly_mul(a.coeff, b.coeff));
  return r;
}

ExpPoly ExpPoly::scale(const Scalar& c) const {
  ExpPoly r;
  if (c.is_zero()) return r;
  for (const auto& t : terms_) r.add_term(t.base, npoly_scale(t.coeff, c));
  return r;
}

bool ExpPoly::operator==(const ExpPoly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].base != o.terms_[i].base) return false;
    if (terms_[i].coeff != o.terms_[i].coeff) return false;
  }
  return true;
}

Scalar ExpPoly::eval(unsigned long n) const {
  Scalar out;
  Scalar nval{Rational(static_cast<long>(n))};
  for (const auto& t : terms_) {
    Rational b = pow_rational(t.base, n);  // 0^0 = 1
    if (b == 0) continue;
    out += npoly_eval(t.coeff, nval) * Scalar(b);
  }
  return out;
}

ExpPoly ExpPoly::strip_base0() const {
  ExpPoly r;
  for (const auto& t : terms_)
    if (t.base != 0) r.add_term(t.base, t.coeff);
  return r;
}

bool ExpPoly::has_base0() const {
  for (const auto& t : terms_)
    if (t.base == 0) return true;
  return false;
}

namespace {

struct Atom {
  bool neg;
  std::string body;
};

bool is_atom_string(const std::string& s) {
  return s.find(' ') == std::string::npos && s.find('/') == std::string::npos &&
         s.find('*') == std::string::npos;
}

/// One rendered product c * factor with the sign pulled out for rational c.
/// factor may be empty; factor_first controls where a symbolic c goes
/// ("2^n*(x0 + 1)" vs "(x0 + 1)*n").
Atom coeff_atom(const Scalar& c, const std::string& factor, bool factor_first) {
  if (c.is_rational()) {
    Rational v = c.rational_value();
    bool neg = v < 0;
    Rational mag = neg ? Rational(-v) : v;
    if (factor.empty()) return {neg, to_string(mag)};
    Integer p = mag.get_num();
    Integer q = mag.get_den();
    std::string head = p == 1 ? factor : to_string(Rational(p)) + "*" + factor;
    return {neg, q == 1 ? head : head + "/" + to_string(Rational(q))};
  }
  std::string cs = c.to_string();
  std::string wrapped = is_atom_string(cs) ? cs : "(" + cs + ")";
  if (factor.empty()) return {false, wrapped};
  return {false, factor_first ? factor + "*" + wrapped : wrapped + "*" + factor};
}

std::string n_power(std::size_t i) {
  return i == 1 ? "n" : "n^" + std::to_string(i);
}

void npoly_atoms(const NPoly& p, std::vector<Atom>& out) {
  for (std::size_t k = p.size(); k > 0; --k) {
    std::size_t i = k - 1;
    if (p[i].is_zero()) continue;
    out.push_back(coeff_atom(p[i], i == 0 ? "" : n_power(i), false));
  }
}

std::string join_atoms(const std::vector<Atom>& atoms) {
  if (atoms.empty()) return "0";
  std::string out;
  for (const auto& a : atoms) {
    if (out.empty()) {
      out = a.neg ? "-" + a.body : a.body;
    } else {
      out += a.neg ? " - " + a.body : " + " + a.body;
    }
  }
  return out;
}

}  // namespace

std::string ExpPoly::to_string() const {
  std::vector<Atom> atoms;
  for (const auto& t : terms_) {
    if (t.base == 1) {
      npoly_atoms(t.coeff, atoms);
      continue;
    }
    bool wrap = t.base < 0 || t.base.get_den() != 1;
    std::string bs = loopinvar::to_string(t.base);
    std::string factor = (wrap ? "(" + bs + ")" : bs) + "^n";
    if (t.coeff.size() <= 1) {
      Scalar c = t.coeff.empty() ? Scalar() : t.coeff[0];
      atoms.push_back(coeff_atom(c, factor, true));
    } else {
      std::vector<Atom> inner;
      npoly_atoms(t.coeff, inner);
      atoms.push_back({false, factor + "*(" + join_atoms(inner) + ")"});
    }
  }
  return join_atoms(atoms);
}

namespace {

/// Q with lambda * Q(n+1) - kappa * Q(n) = P(n), for lambda not in {0, kappa}.
NPoly particular_nonresonant(const NPoly& p, const Rational& lam,
                             const Rational& kap) {
  std::size_t d = p.size() - 1;
  NPoly q(d + 1);
  Scalar lam_s{lam};
  Scalar diff{Rational(lam - kap)};
  for (std::size_t k = d + 1; k > 0; --k) {
    std::size_t i = k - 1;
    Scalar rhs = p[i];
    for (std::size_t j = i + 1; j <= d; ++j)
      rhs -= lam_s * q[j] * Scalar(Rational(binomial(j, i)));
    q[i] = rhs / diff;
  }
  return npoly_trim(std::move(q));
}

/// Q with Q(n+1) - Q(n) = P(n) / kappa and Q(0) = 0 (the resonant case
/// lambda = kappa != 0; the ansatz gains one degree).
NPoly particular_resonant(const NPoly& p, const Rational& kap) {
  std::size_t d = p.size() - 1;
  NPoly q(d + 2);
  Scalar kap_s{kap};
  for (std::size_t k = d + 1; k > 0; --k) {
    std::size_t i = k - 1;
    Scalar rhs = p[i] / kap_s;
    for (std::size_t j = i + 2; j <= d + 1; ++j)
      rhs -= q[j] * Scalar(Rational(binomial(j, i)));
    q[i + 1] = rhs / Scalar(Rational(static_cast<long>(i) + 1));
  }
  return npoly_trim(std::move(q));
}

}  // namespace

FirstOrderSolution solve_first_order(const Rational& kappa, const ExpPoly& h,
                                     const Scalar& s0) {
  return solve_first_order_from(kappa, h, 0, s0);
}

FirstOrderSolution solve_first_order_from(const Rational& kappa, const ExpPoly& h,
                                          unsigned h_valid_from,
                                          const Scalar& anchor) {
  unsigned vf = h_valid_from;
  if (kappa != 0) {
    ExpPoly tp;
    for (const auto& t : h.terms()) {
      if (t.base == 0) {
        // c * 0^n feeds the step n = 0 -> 1 only; the exact particular
        // solution is (c/kappa) * (kappa^n - 0^n).
        Scalar ck = t.coeff[0] / Scalar(kappa);
        tp = tp + ExpPoly::geometric(kappa, ck) - ExpPoly::geometric(Rational(0), ck);
      } else if (t.base == kappa) {
        tp = tp + ExpPoly::term(t.base, particular_resonant(t.coeff, kappa));
      } else {
        tp = tp + ExpPoly::term(t.base, particular_nonresonant(t.coeff, t.base, kappa));
      }
    }
    Scalar c = (anchor - tp.eval(vf)) / Scalar(pow_rational(kappa, vf));
    return {tp + ExpPoly::geometric(kappa, c), vf};
  }

  // kappa = 0: S(n) = h(n - 1) wherever the recurrence applies.
  ExpPoly shifted;
  bool spike = false;
  for (const auto& t : h.terms()) {
    if (t.base == 0) {
      // c * 0^(n-1) is a spike at n = 1, which no exponential polynomial
      // expresses; it only matters when the recurrence covers n = 0.
      if (vf == 0) spike = true;
      continue;
    }
    NPoly q = npoly_scale(npoly_shift(t.coeff, -1), Scalar(Rational(1) / t.base));
    shifted = shifted + ExpPoly::term(t.base, q);
  }
  if (vf == 0) {
    if (spike) return {shifted, 2};
    Scalar c0 = anchor - shifted.eval(0);
    return {shifted + ExpPoly::geometric(Rational(0), c0), 0};
  }
  if (shifted.eval(vf) == anchor) return {shifted, vf};
  return {shifted, vf + 1};
}

}  // namespace loopinvar
