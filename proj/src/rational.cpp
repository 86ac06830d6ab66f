#include "loopinvar/rational.hpp"

#include <algorithm>
#include <cctype>
#include <random>

namespace loopinvar {

std::optional<Rational> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::string s = text;
  bool negative = false;
  std::size_t i = 0;
  if (s[0] == '+' || s[0] == '-') {
    negative = s[0] == '-';
    i = 1;
  }
  if (i >= s.size()) return std::nullopt;

  auto digits_only = [](const std::string& t) {
    if (t.empty()) return false;
    for (char c : t)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };

  std::string body = s.substr(i);
  Rational value;
  auto slash = body.find('/');
  auto dot = body.find('.');
  if (slash != std::string::npos) {
    std::string num = body.substr(0, slash);
    std::string den = body.substr(slash + 1);
    if (!digits_only(num) || !digits_only(den)) return std::nullopt;
    Integer d(den, 10);
    if (d == 0) return std::nullopt;
    value = Rational(Integer(num, 10), d);
  } else if (dot != std::string::npos) {
    std::string whole = body.substr(0, dot);
    std::string frac = body.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!digits_only(whole) || !digits_only(frac)) return std::nullopt;
    Integer scale = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
    value = Rational(Integer(whole, 10) * scale + (frac.empty() ? Integer(0) : Integer(frac, 10)),
                     scale);
  } else {
    if (!digits_only(body)) return std::nullopt;
    value = Rational(Integer(body, 10));
  }
  value.canonicalize();
  if (negative) value = -value;
  return value;
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational pow_rational(const Rational& r, unsigned long e) {
  Rational acc = 1;
  Rational base = r;
  unsigned long k = e;
  while (k > 0) {
    if (k & 1UL) acc *= base;
    base *= base;
    k >>= 1;
  }
  return acc;
}

Integer binomial(unsigned long n, unsigned long k) {
  if (k > n) return 0;
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

Integer double_factorial(long k) {
  if (k <= 0) return 1;
  Integer acc = 1;
  for (long v = k; v > 1; v -= 2) acc *= v;
  return acc;
}

bool is_integer(const Rational& r) { return r.get_den() == 1; }

namespace {

bool is_probable_prime(const Integer& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

Integer pollard_rho(const Integer& n, std::mt19937_64& rng) {
  // Brent-style rho; n must be composite and odd.
  while (true) {
    Integer c = Integer(static_cast<unsigned long>(rng() % 1000 + 1));
    Integer x = Integer(static_cast<unsigned long>(rng() % 1000 + 2));
    Integer y = x;
    Integer d = 1;
    auto step = [&](Integer v) {
      Integer r = (v * v + c) % n;
      return r;
    };
    while (d == 1) {
      x = step(x);
      y = step(step(y));
      Integer diff = x - y;
      if (diff < 0) diff = -diff;
      if (diff == 0) break;
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (d != 1 && d != n) return d;
  }
}

void factor_rec(const Integer& n, std::vector<Integer>& primes, std::mt19937_64& rng) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    primes.push_back(n);
    return;
  }
  Integer d = pollard_rho(n, rng);
  factor_rec(d, primes, rng);
  factor_rec(n / d, primes, rng);
}

}  // namespace

std::vector<std::pair<Integer, unsigned>> factor_integer(const Integer& n_in) {
  Integer n = n_in < 0 ? Integer(-n_in) : n_in;
  std::vector<std::pair<Integer, unsigned>> out;
  if (n == 0) return out;
  for (unsigned long p : {2UL, 3UL, 5UL, 7UL, 11UL, 13UL}) {
    unsigned e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      n /= static_cast<unsigned long>(p);
      ++e;
    }
    if (e) out.emplace_back(Integer(static_cast<unsigned long>(p)), e);
  }
  unsigned long d = 17;
  while (n > 1 && d < 100000UL && Integer(d) * Integer(d) <= n) {
    unsigned e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
      n /= d;
      ++e;
    }
    if (e) out.emplace_back(Integer(d), e);
    d += 2;
  }
  if (n > 1) {
    std::vector<Integer> rest;
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    factor_rec(n, rest, rng);
    std::sort(rest.begin(), rest.end());
    for (std::size_t i = 0; i < rest.size();) {
      std::size_t j = i;
      while (j < rest.size() && rest[j] == rest[i]) ++j;
      out.emplace_back(rest[i], static_cast<unsigned>(j - i));
      i = j;
    }
  }
  return out;
}

std::vector<Integer> divisors(const Integer& n) {
  auto fac = factor_integer(n);
  std::vector<Integer> out{Integer(1)};
  for (const auto& [p, e] : fac) {
    std::size_t base = out.size();
    Integer pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  return out;
}

}  // namespace loopinvar
