#include "loopinvar/param_poly.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <sstream>

#include "loopinvar/errors.hpp"

namespace loopinvar {

unsigned pmono_degree(const PMonomial& m) {
  unsigned d = 0;
  for (const auto& [name, e] : m) d += e;
  return d;
}

bool pmono_graded_less(const PMonomial& a, const PMonomial& b) {
  unsigned da = pmono_degree(a), db = pmono_degree(b);
  if (da != db) return da < db;
  // Lexicographic with variables in name order: the first variable whose
  // exponents differ decides, larger exponent greater. (Plain std::map
  // comparison is not multiplication-compatible, which the division
  // algorithm relies on.)
  auto ia = a.begin(), ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first != ib->first) {
      // One side has exponent 0 on the earlier-named variable.
      return ia->first > ib->first;
    }
    if (ia->second != ib->second) return ia->second < ib->second;
    ++ia;
    ++ib;
  }
  return ib != b.end();
}

ParamPoly::ParamPoly(long c) {
  if (c != 0) terms_[PMonomial{}] = Integer(c);
}

ParamPoly::ParamPoly(const Integer& c) {
  if (c != 0) terms_[PMonomial{}] = c;
}

ParamPoly ParamPoly::variable(const std::string& name, unsigned exp) {
  ParamPoly p;
  if (exp == 0) return ParamPoly(1);
  PMonomial m;
  m[name] = exp;
  p.terms_[m] = 1;
  return p;
}

bool ParamPoly::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && terms_.begin()->first.empty();
}

Integer ParamPoly::constant_value() const {
  if (terms_.empty()) return 0;
  auto it = terms_.find(PMonomial{});
  if (terms_.size() != 1 || it == terms_.end())
    throw Error("constant_value on non-constant ParamPoly");
  return it->second;
}

void ParamPoly::add_term(const PMonomial& m, const Integer& c) {
  if (c == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

ParamPoly ParamPoly::operator-() const {
  ParamPoly r;
  for (const auto& [m, c] : terms_) r.terms_[m] = -c;
  return r;
}

ParamPoly ParamPoly::operator+(const ParamPoly& o) const {
  ParamPoly r = *this;
  r += o;
  return r;
}

ParamPoly ParamPoly::operator-(const ParamPoly& o) const {
  ParamPoly r = *this;
  r -= o;
  return r;
}

ParamPoly& ParamPoly::operator+=(const ParamPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

ParamPoly& ParamPoly::operator-=(const ParamPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

ParamPoly ParamPoly::operator*(const ParamPoly& o) const {
  ParamPoly r;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      PMonomial m = ma;
      for (const auto& [name, e] : mb) m[name] += e;
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

ParamPoly& ParamPoly::operator*=(const ParamPoly& o) {
  *this = *this * o;
  return *this;
}

ParamPoly ParamPoly::pow(unsigned e) const {
  ParamPoly acc(1);
  ParamPoly base = *this;
  while (e > 0) {
    if (e & 1u) acc *= base;
    e >>= 1u;
    if (e > 0) base *= base;
  }
  return acc;
}

unsigned ParamPoly::degree() const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, pmono_degree(m));
  return d;
}

unsigned ParamPoly::degree_in(const std::string& name) const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) {
    auto it = m.find(name);
    if (it != m.end()) d = std::max(d, it->second);
  }
  return d;
}

Integer ParamPoly::int_content() const {
  Integer g = 0;
  for (const auto& [m, c] : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

const PMonomial& ParamPoly::leading_monomial() const {
  if (terms_.empty()) throw Error("leading_monomial of zero ParamPoly");
  const PMonomial* best = &terms_.begin()->first;
  for (const auto& [m, c] : terms_) {
    if (pmono_graded_less(*best, m)) best = &m;
  }
  return *best;
}

Integer ParamPoly::leading_coeff() const {
  if (terms_.empty()) return 0;
  return terms_.at(leading_monomial());
}

ParamPoly ParamPoly::divide_exact(const ParamPoly& d) const {
  auto q = try_divide(d);
  if (!q) throw Error("ParamPoly exact division failed");
  return std::move(*q);
}

std::optional<ParamPoly> ParamPoly::try_divide(const ParamPoly& d) const {
  if (d.is_zero()) throw Error("ParamPoly division by zero");
  ParamPoly q;
  ParamPoly r = *this;
  const PMonomial& dm = d.leading_monomial();
  const Integer dc = d.leading_coeff();
  while (!r.is_zero()) {
    const PMonomial& rm = r.leading_monomial();
    const Integer rc = r.terms_.at(rm);
    // Monomial quotient rm / dm.
    PMonomial qm = rm;
    for (const auto& [name, e] : dm) {
      auto it = qm.find(name);
      if (it == qm.end() || it->second < e) return std::nullopt;
      it->second -= e;
      if (it->second == 0) qm.erase(it);
    }
    Integer qc, rem;
    mpz_tdiv_qr(qc.get_mpz_t(), rem.get_mpz_t(), rc.get_mpz_t(), dc.get_mpz_t());
    if (rem != 0) return std::nullopt;
    ParamPoly t;
    t.terms_[qm] = qc;
    q += t;
    r -= t * d;
  }
  return q;
}

ParamPoly ParamPoly::divide_int(const Integer& d) const {
  if (d == 0) throw Error("ParamPoly division by integer zero");
  ParamPoly r;
  for (const auto& [m, c] : terms_) {
    Integer qc, rem;
    mpz_tdiv_qr(qc.get_mpz_t(), rem.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
    if (rem != 0) throw Error("ParamPoly integer division not exact");
    r.terms_[m] = qc;
  }
  return r;
}

namespace {

using CoeffMap = std::map<unsigned, ParamPoly>;

/// Coefficients of p viewed as a univariate polynomial in `x`,
/// exponent-of-x -> coefficient polynomial (which does not mention x).
CoeffMap decompose(const ParamPoly& p, const std::string& x) {
  CoeffMap out;
  for (const auto& [m, c] : p.terms()) {
    unsigned e = 0;
    PMonomial rest = m;
    auto it = rest.find(x);
    if (it != rest.end()) {
      e = it->second;
      rest.erase(it);
    }
    out[e].add_term(rest, c);
  }
  return out;
}

ParamPoly recompose(const CoeffMap& coeffs, const std::string& x) {
  ParamPoly r;
  for (const auto& [e, c] : coeffs) {
    for (const auto& [m, cc] : c.terms()) {
      PMonomial full = m;
      if (e > 0) full[x] = e;
      r.add_term(full, cc);
    }
  }
  return r;
}

unsigned deg_in(const CoeffMap& coeffs) {
  return coeffs.empty() ? 0u : coeffs.rbegin()->first;
}

ParamPoly sign_normalized(ParamPoly p) {
  if (!p.is_zero() && p.leading_coeff() < 0) return -p;
  return p;
}

/// gcd of all coefficient polynomials of a decomposed map.
ParamPoly map_content(const CoeffMap& coeffs) {
  ParamPoly c;
  for (const auto& [e, coeff] : coeffs) {
    c = ParamPoly::gcd(c, coeff);
    if (c.is_constant() && c.constant_value() == 1) break;
  }
  return c;
}

/// Divide every coefficient of the map by cont, in place.
void divide_map(CoeffMap& coeffs, const ParamPoly& cont) {
  if (cont.is_constant() && cont.constant_value() == 1) return;
  for (auto& [e, coeff] : coeffs) coeff = coeff.divide_exact(cont);
}

/// Trim the common integer content of the map's coefficients, in place.
void trim_int_content(CoeffMap& coeffs) {
  Integer g = 0;
  for (const auto& [e, coeff] : coeffs) {
    Integer ic = coeff.int_content();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ic.get_mpz_t());
    if (g == 1) return;
  }
  if (g <= 1) return;
  for (auto& [e, coeff] : coeffs) coeff = coeff.divide_int(g);
}

/// Pseudo-remainder of f by g (both decomposed over the same variable,
/// deg f >= deg g > 0): repeatedly eliminates the top coefficient after
/// scaling by lc(g), trimming integer content to limit coefficient growth.
CoeffMap pseudo_rem_map(CoeffMap r, const CoeffMap& g) {
  const unsigned dg = deg_in(g);
  const ParamPoly& lg = g.rbegin()->second;
  while (!r.empty()) {
    unsigned dr = r.rbegin()->first;
    if (dr < dg) break;
    ParamPoly lr = r.rbegin()->second;
    // r := lg*r - lr * x^(dr-dg) * g; the top terms cancel by construction.
    CoeffMap nr;
    for (const auto& [e, c] : r) {
      if (e != dr) nr[e] = lg * c;
    }
    for (const auto& [e, c] : g) {
      if (e == dg) continue;
      unsigned at = e + dr - dg;
      auto it = nr.find(at);
      if (it == nr.end()) {
        nr[at] = -(lr * c);
      } else {
        it->second -= lr * c;
        if (it->second.is_zero()) nr.erase(it);
      }
    }
    for (auto it = nr.begin(); it != nr.end();) {
      it = it->second.is_zero() ? nr.erase(it) : std::next(it);
    }
    r = std::move(nr);
    trim_int_content(r);
  }
  return r;
}

/// The per-variable minimum exponent over all terms (the largest monomial
/// dividing every term). Empty map for a poly with a monomial-free term.
PMonomial monomial_content(const ParamPoly& p) {
  PMonomial acc = p.terms().begin()->first;
  for (const auto& [m, c] : p.terms()) {
    if (acc.empty()) break;
    for (auto it = acc.begin(); it != acc.end();) {
      auto jt = m.find(it->first);
      if (jt == m.end()) {
        it = acc.erase(it);
      } else {
        it->second = std::min(it->second, jt->second);
        ++it;
      }
    }
  }
  return acc;
}

/// Divide every term by the given monomial (must divide each term).
ParamPoly divide_monomial(const ParamPoly& p, const PMonomial& m) {
  if (m.empty()) return p;
  ParamPoly r;
  for (const auto& [pm, c] : p.terms()) {
    PMonomial q = pm;
    for (const auto& [name, e] : m) {
      auto it = q.find(name);
      if (it == q.end() || it->second < e)
        throw Error("ParamPoly monomial division failed");
      it->second -= e;
      if (it->second == 0) q.erase(it);
    }
    r.add_term(q, c);
  }
  return r;
}

/// True if a == b or a == -b as polynomials; sets `same_sign` accordingly.
bool equal_up_to_sign(const ParamPoly& a, const ParamPoly& b, bool& same_sign) {
  if (a.size() != b.size()) return false;
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  int sign = 0;  // 0 unknown, 1 same, -1 opposite
  for (; ia != a.terms().end(); ++ia, ++ib) {
    if (ia->first != ib->first) return false;
    if (ia->second == ib->second) {
      if (sign == -1) return false;
      sign = 1;
    } else if (ia->second == -ib->second) {
      if (sign == 1) return false;
      sign = -1;
    } else {
      return false;
    }
  }
  same_sign = sign >= 0;
  return true;
}

}  // namespace

ParamPoly ParamPoly::gcd(const ParamPoly& a, const ParamPoly& b) {
  if (a.is_zero()) return sign_normalized(b);
  if (b.is_zero()) return sign_normalized(a);

  // The integer content and the largest shared monomial split off cheaply;
  // what remains is a gcd of primitive polynomials with unit content.
  Integer ia = a.int_content(), ib = b.int_content();
  Integer ig;
  mpz_gcd(ig.get_mpz_t(), ia.get_mpz_t(), ib.get_mpz_t());
  if (a.is_constant() || b.is_constant()) {
    // A constant's only divisors are integers, so the variables drop out.
    return ParamPoly(ig);
  }

  PMonomial ma = monomial_content(a);
  PMonomial mb = monomial_content(b);
  PMonomial mg;
  for (const auto& [name, e] : ma) {
    auto it = mb.find(name);
    if (it != mb.end()) mg[name] = std::min(e, it->second);
  }
  ParamPoly shared(ig);
  if (!mg.empty()) {
    ParamPoly mono;
    mono.add_term(mg, 1);
    shared = shared * mono;
  }

  ParamPoly pa = divide_monomial(a.divide_int(ia), ma);
  ParamPoly pb = divide_monomial(b.divide_int(ib), mb);
  // A stripped monomial is the unit polynomial.
  if (pa.is_constant() || pb.is_constant()) return shared;

  bool same_sign = false;
  if (equal_up_to_sign(pa, pb, same_sign)) return shared * sign_normalized(pa);

  std::set<std::string> psa, psb;
  pa.collect_params(psa);
  pb.collect_params(psb);
  // With disjoint variable sets, two primitive polynomials are coprime.
  std::vector<std::string> common;
  for (const auto& n : psa) {
    if (psb.count(n)) common.push_back(n);
  }
  if (common.empty()) return shared;

  // Eliminate over the shared variable where the smaller of the two degrees
  // is minimal: that bounds the number of pseudo-division steps.
  std::string x = common.front();
  unsigned best_min = 0, best_max = 0;
  bool first = true;
  for (const auto& n : common) {
    unsigned da = pa.degree_in(n), db = pb.degree_in(n);
    unsigned lo = std::min(da, db), hi = std::max(da, db);
    if (first || lo < best_min || (lo == best_min && hi < best_max)) {
      x = n;
      best_min = lo;
      best_max = hi;
      first = false;
    }
  }

  CoeffMap f = decompose(pa, x);
  CoeffMap g = decompose(pb, x);
  ParamPoly cf = map_content(f);
  ParamPoly cg = map_content(g);
  ParamPoly c = gcd(cf, cg);
  divide_map(f, cf);
  divide_map(g, cg);
  if (deg_in(f) < deg_in(g)) std::swap(f, g);

  while (true) {
    if (deg_in(g) == 0) {
      // Primitive parts share no x-free factor beyond constants.
      return sign_normalized(shared * c);
    }
    CoeffMap r = pseudo_rem_map(f, g);
    if (r.empty()) return sign_normalized(shared * c * recompose(g, x));
    if (deg_in(r) == 0) {
      // A common divisor of the primitive parts must be x-free, hence trivial.
      return sign_normalized(shared * c);
    }
    f = std::move(g);
    ParamPoly cr = map_content(r);
    divide_map(r, cr);
    g = std::move(r);
  }
}

namespace {

constexpr unsigned long long kProbePrime = 2305843009213693951ULL;  // 2^61 - 1

unsigned long long mulmod_probe(unsigned long long a, unsigned long long b) {
  return static_cast<unsigned long long>(
      (static_cast<unsigned __int128>(a) * b) % kProbePrime);
}

unsigned long long powmod_probe(unsigned long long b, unsigned long long e) {
  unsigned long long acc = 1;
  b %= kProbePrime;
  while (e > 0) {
    if (e & 1ULL) acc = mulmod_probe(acc, b);
    b = mulmod_probe(b, b);
    e >>= 1ULL;
  }
  return acc;
}

using ProbePoly = std::vector<unsigned long long>;  // dense, low-to-high

void probe_trim(ProbePoly& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

/// Euclidean gcd of two univariate polynomials over the probe field.
ProbePoly probe_gcd(ProbePoly a, ProbePoly b) {
  probe_trim(a);
  probe_trim(b);
  while (!b.empty()) {
    unsigned long long inv = powmod_probe(b.back(), kProbePrime - 2);
    while (a.size() >= b.size()) {
      unsigned long long f = mulmod_probe(a.back(), inv);
      std::size_t off = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) {
        unsigned long long sub = mulmod_probe(f, b[i]);
        unsigned long long& slot = a[off + i];
        slot = (slot >= sub) ? slot - sub : slot + (kProbePrime - sub);
      }
      probe_trim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return a;
}

/// Image of p as a univariate polynomial in v over the probe field, the other
/// variables evaluated at the given points. Empty optional when an exponent
/// is too large to probe densely; empty vector when the image vanishes.
std::optional<ProbePoly> probe_image(
    const ParamPoly& p, const std::string& v,
    const std::map<std::string, unsigned long long>& vals) {
  ProbePoly img;
  for (const auto& [m, c] : p.terms()) {
    unsigned ev = 0;
    unsigned long long t = mpz_fdiv_ui(c.get_mpz_t(), kProbePrime);
    for (const auto& [name, e] : m) {
      if (name == v) {
        ev = e;
        continue;
      }
      t = mulmod_probe(t, powmod_probe(vals.at(name), e));
    }
    if (ev > 4096) return std::nullopt;
    if (img.size() <= ev) img.resize(ev + 1, 0);
    img[ev] = (img[ev] + t) % kProbePrime;
  }
  probe_trim(img);
  return img;
}

}  // namespace

ParamPoly probable_common_divisor(const std::vector<const ParamPoly*>& ps) {
  std::vector<const ParamPoly*> nz;
  for (const ParamPoly* p : ps) {
    if (p != nullptr && !p->is_zero()) nz.push_back(p);
  }
  if (nz.empty()) return ParamPoly(1);
  if (nz.size() == 1) return sign_normalized(*nz.front());

  Integer ig = 0;
  for (const ParamPoly* p : nz) {
    Integer ic = p->int_content();
    mpz_gcd(ig.get_mpz_t(), ig.get_mpz_t(), ic.get_mpz_t());
    if (ig == 1) break;
  }
  PMonomial mg = monomial_content(*nz.front());
  for (std::size_t i = 1; i < nz.size() && !mg.empty(); ++i) {
    PMonomial o = monomial_content(*nz[i]);
    for (auto it = mg.begin(); it != mg.end();) {
      auto jt = o.find(it->first);
      if (jt == o.end()) {
        it = mg.erase(it);
      } else {
        it->second = std::min(it->second, jt->second);
        ++it;
      }
    }
  }
  ParamPoly base(ig);
  if (!mg.empty()) {
    ParamPoly mono;
    mono.add_term(mg, 1);
    base = base * mono;
  }

  // Only a variable occurring in every polynomial can occur in a common
  // divisor; probe each such variable with a random evaluation to see
  // whether a nonconstant factor is plausible at all.
  std::set<std::string> cand;
  nz.front()->collect_params(cand);
  for (std::size_t i = 1; i < nz.size() && !cand.empty(); ++i) {
    std::set<std::string> s;
    nz[i]->collect_params(s);
    for (auto it = cand.begin(); it != cand.end();) {
      it = s.count(*it) ? std::next(it) : cand.erase(it);
    }
  }
  if (cand.empty()) return base;

  static thread_local std::mt19937_64 rng(0x5eed5eedULL);
  std::set<std::string> all;
  for (const ParamPoly* p : nz) p->collect_params(all);
  std::map<std::string, unsigned long long> vals;
  for (const auto& n : all) vals[n] = 1 + rng() % (kProbePrime - 1);

  bool nontrivial = false;
  for (const auto& v : cand) {
    ProbePoly g;
    bool inconclusive = false;
    for (const ParamPoly* p : nz) {
      auto img = probe_image(*p, v, vals);
      if (!img || img->empty()) {
        inconclusive = true;
        break;
      }
      g = g.empty() ? std::move(*img) : probe_gcd(std::move(g), std::move(*img));
      if (g.size() == 1) break;
    }
    if (inconclusive || g.size() > 1) {
      nontrivial = true;
      break;
    }
  }
  if (!nontrivial) return base;

  // A full gcd chain can be expensive on large operands; callers only rely
  // on exact divisibility, so fall back to the cheap part beyond this size.
  std::size_t total = 0;
  for (const ParamPoly* p : nz) total += p->size();
  if (total > 240) return base;

  ParamPoly g;
  for (const ParamPoly* p : nz) {
    g = ParamPoly::gcd(g, *p);
    if (g.is_constant() && g.constant_value() == 1) break;
  }
  return g;
}

void ParamPoly::collect_params(std::set<std::string>& out) const {
  for (const auto& [m, c] : terms_) {
    for (const auto& [name, e] : m) out.insert(name);
  }
}

bool ParamPoly::mentions(const std::string& name) const {
  for (const auto& [m, c] : terms_) {
    if (m.count(name)) return true;
  }
  return false;
}

Rational ParamPoly::specialize(const std::map<std::string, Rational>& vals) const {
  Rational acc = 0;
  for (const auto& [m, c] : terms_) {
    Rational t(c);
    for (const auto& [name, e] : m) {
      auto it = vals.find(name);
      if (it == vals.end())
        throw Error("specialize: no value for parameter '" + name + "'");
      t *= pow_rational(it->second, e);
    }
    acc += t;
  }
  return acc;
}

std::string ParamPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<const std::pair<const PMonomial, Integer>*> order;
  order.reserve(terms_.size());
  for (const auto& t : terms_) order.push_back(&t);
  std::sort(order.begin(), order.end(), [](const auto* p, const auto* q) {
    return pmono_graded_less(q->first, p->first);  // descending
  });
  std::ostringstream os;
  bool first = true;
  for (const auto* t : order) {
    const PMonomial& m = t->first;
    Integer c = t->second;
    bool neg = c < 0;
    Integer ac = neg ? Integer(-c) : c;
    if (first) {
      if (neg) os << "-";
      first = false;
    } else {
      os << (neg ? " - " : " + ");
    }
    std::string vars;
    for (const auto& [name, e] : m) {
      if (!vars.empty()) vars += "*";
      vars += name;
      if (e > 1) vars += "^" + std::to_string(e);
    }
    if (vars.empty()) {
      os << ac.get_str();
    } else if (ac == 1) {
      os << vars;
    } else {
      os << ac.get_str() << "*" << vars;
    }
  }
  return os.str();
}

}  // namespace loopinvar
