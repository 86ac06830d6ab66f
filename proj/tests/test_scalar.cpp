#include <doctest.h>

#include <random>
#include <vector>

#include "loopinvar/errors.hpp"
#include "loopinvar/param_poly.hpp"
#include "loopinvar/scalar.hpp"

using namespace loopinvar;

namespace {

ParamPoly var(const std::string& n, unsigned e = 1) {
  return ParamPoly::variable(n, e);
}

// Random small polynomial in the given variables.
ParamPoly random_poly(std::mt19937& gen, const std::vector<std::string>& vars,
                      int terms, int max_exp, int max_coeff) {
  std::uniform_int_distribution<int> coeff(-max_coeff, max_coeff);
  std::uniform_int_distribution<int> expd(0, max_exp);
  ParamPoly p;
  for (int t = 0; t < terms; ++t) {
    ParamPoly m(Integer(coeff(gen)));
    for (const auto& v : vars) m = m * var(v, static_cast<unsigned>(expd(gen)));
    p = p + m;
  }
  return p;
}

}  // namespace

TEST_SUITE("scalar") {

TEST_CASE("ParamPoly basics") {
  ParamPoly a = var("a");
  ParamPoly b = var("b");
  CHECK((a + b).to_string() == "a + b");
  CHECK((a - a).is_zero());
  CHECK((a * a).to_string() == "a^2");
  CHECK(ParamPoly(Integer(0)).is_zero());
  CHECK(ParamPoly(Integer(5)).is_constant());
  CHECK(ParamPoly(Integer(5)).constant_value() == Integer(5));
  CHECK((a * b + ParamPoly(Integer(2))).to_string() == "a*b + 2");
}

TEST_CASE("ParamPoly to_string orders terms by descending graded-lex") {
  ParamPoly p = var("y") + var("x") + ParamPoly(Integer(2)) +
                var("x") * var("y") + var("x", 2);
  // Degree-2 terms first (x^2 before x*y), then degree 1 (x before y),
  // then the constant.
  CHECK(p.to_string() == "x^2 + x*y + x + y + 2");
}

TEST_CASE("graded-lex order is compatible with multiplication") {
  // Regression guard: {a, c} vs {b^2} must keep their relative order after
  // multiplying both by a.
  PMonomial m1{{"a", 1}, {"c", 1}};
  PMonomial m2{{"b", 2}};
  PMonomial m1a{{"a", 2}, {"c", 1}};
  PMonomial m2a{{"a", 1}, {"b", 2}};
  CHECK(pmono_graded_less(m2, m1));
  CHECK(pmono_graded_less(m2a, m1a));

  std::mt19937 gen(7);
  std::uniform_int_distribution<int> expd(0, 3);
  auto random_mono = [&] {
    PMonomial m;
    for (const char* n : {"a", "b", "c"}) {
      unsigned e = static_cast<unsigned>(expd(gen));
      if (e) m[n] = e;
    }
    return m;
  };
  auto mul = [](const PMonomial& x, const PMonomial& y) {
    PMonomial r = x;
    for (const auto& [n, e] : y) r[n] += e;
    return r;
  };
  for (int i = 0; i < 200; ++i) {
    PMonomial x = random_mono(), y = random_mono(), z = random_mono();
    if (pmono_graded_less(x, y))
      CHECK(pmono_graded_less(mul(x, z), mul(y, z)));
  }
}

TEST_CASE("divide_exact and try_divide") {
  ParamPoly a = var("a"), b = var("b");
  ParamPoly p = (a + b) * (a - b);
  CHECK(p.divide_exact(a + b).to_string() == "a - b");
  CHECK_FALSE((a + ParamPoly(Integer(1))).try_divide(b).has_value());
  CHECK_FALSE(p.try_divide(a + ParamPoly(Integer(2))).has_value());
  CHECK_THROWS_AS(p.divide_exact(ParamPoly()), Error);

  std::mt19937 gen(11);
  std::vector<std::string> vars = {"a", "b", "c"};
  for (int i = 0; i < 30; ++i) {
    ParamPoly q = random_poly(gen, vars, 3, 2, 4);
    ParamPoly d = random_poly(gen, vars, 2, 2, 3);
    if (d.is_zero()) continue;
    CHECK((q * d).divide_exact(d) == q);
  }
}

TEST_CASE("ParamPoly::gcd on structured inputs") {
  ParamPoly a = var("a"), b = var("b");
  ParamPoly s = a + b;
  CHECK(ParamPoly::gcd(s * s * ParamPoly(Integer(6)),
                       s * ParamPoly(Integer(4))) == s * ParamPoly(Integer(2)));
  CHECK(ParamPoly::gcd(a * a - b * b, (a + b) * (a + b)) == a + b);
  CHECK(ParamPoly::gcd(ParamPoly(Integer(6)),
                       a * ParamPoly(Integer(4)) + b * ParamPoly(Integer(2))) ==
        ParamPoly(Integer(2)));
  CHECK(ParamPoly::gcd(a + ParamPoly(Integer(1)), b + ParamPoly(Integer(1))) ==
        ParamPoly(Integer(1)));
  // Result is sign-normalized.
  CHECK(ParamPoly::gcd(a * ParamPoly(Integer(-2)), a * ParamPoly(Integer(4))) ==
        a * ParamPoly(Integer(2)));
  CHECK(ParamPoly::gcd(ParamPoly(), a) == a);
  CHECK(ParamPoly::gcd(a, ParamPoly()) == a);
}

TEST_CASE("ParamPoly::gcd divides both inputs exactly") {
  std::mt19937 gen(23);
  std::vector<std::string> vars = {"a", "b"};
  for (int i = 0; i < 25; ++i) {
    ParamPoly g = random_poly(gen, vars, 2, 2, 3);
    ParamPoly u = random_poly(gen, vars, 2, 2, 3);
    ParamPoly v = random_poly(gen, vars, 2, 2, 3);
    ParamPoly x = g * u, y = g * v;
    if (x.is_zero() && y.is_zero()) continue;
    ParamPoly d = ParamPoly::gcd(x, y);
    REQUIRE_FALSE(d.is_zero());
    if (!x.is_zero()) CHECK(x.try_divide(d).has_value());
    if (!y.is_zero()) CHECK(y.try_divide(d).has_value());
    // d is a common divisor at least as large as g in degree terms: g | x and
    // g | y, so d must absorb any monomial content of g; the exact maximality
    // is covered by the structured cases above. Here we at least require g to
    // divide x/d * d i.e. d to contain enough of g for exactness downstream.
    if (!g.is_zero() && !x.is_zero() && !y.is_zero())
      CHECK(d.try_divide(ParamPoly::gcd(d, g)).has_value());
  }
}

TEST_CASE("probable_common_divisor divides every input") {
  std::mt19937 gen(31);
  std::vector<std::string> vars = {"a", "b", "c"};
  for (int i = 0; i < 25; ++i) {
    ParamPoly g = random_poly(gen, vars, 2, 1, 3);
    if (g.is_zero()) g = var("a") + ParamPoly(Integer(1));
    ParamPoly x = g * random_poly(gen, vars, 2, 1, 3);
    ParamPoly y = g * random_poly(gen, vars, 2, 1, 3);
    ParamPoly z = g * random_poly(gen, vars, 2, 1, 3);
    std::vector<const ParamPoly*> ps;
    for (const ParamPoly* p : {&x, &y, &z})
      if (!p->is_zero()) ps.push_back(p);
    if (ps.empty()) continue;
    ParamPoly d = probable_common_divisor(ps);
    REQUIRE_FALSE(d.is_zero());
    for (const ParamPoly* p : ps) CHECK(p->try_divide(d).has_value());
  }
  // Single input: returned up to sign normalization.
  ParamPoly m = var("a") * ParamPoly(Integer(-3));
  std::vector<const ParamPoly*> one = {&m};
  CHECK(probable_common_divisor(one) == var("a") * ParamPoly(Integer(3)));
  std::vector<const ParamPoly*> none;
  CHECK(probable_common_divisor(none) == ParamPoly(Integer(1)));
}

TEST_CASE("Scalar reduces to canonical form") {
  ParamPoly d = var("D");
  Scalar two = Scalar::from_ratio(d * ParamPoly(Integer(2)), d);
  CHECK(two.is_rational());
  CHECK(two.rational_value() == Rational(2));
  CHECK(two == Scalar(Rational(2)));

  ParamPoly a = var("a");
  Scalar s = Scalar::from_ratio(a * a - ParamPoly(Integer(1)),
                                a + ParamPoly(Integer(1)));
  CHECK(s.to_string() == "a - 1");

  // Denominator sign is normalized.
  Scalar neg = Scalar::from_ratio(ParamPoly(Integer(1)), a * ParamPoly(Integer(-1)));
  CHECK(neg.to_string() == "-1/a");
}

TEST_CASE("Scalar arithmetic") {
  Scalar a = Scalar::param("a");
  Scalar one(Rational(1));
  Scalar inv = one / a;
  CHECK((inv + inv).to_string() == "2/a");
  CHECK((inv * a).is_one());
  CHECK((a - a).is_zero());
  CHECK((a * a).to_string() == "a^2");
  Scalar h(Rational(1, 2));
  CHECK((a * h).to_string() == "a/2");
  CHECK((a + h).to_string() == "(2*a + 1)/2");
  CHECK_THROWS_AS(one / Scalar(), Error);
  Scalar p = a.pow(3);
  CHECK(p.to_string() == "a^3");
  CHECK(Scalar(Rational(-1, 2)).pow(2) == Scalar(Rational(1, 4)));
}

TEST_CASE("Scalar to_string parenthesization") {
  Scalar a = Scalar::param("a");
  Scalar b = Scalar::param("b");
  CHECK(((a + Scalar(Rational(1))) / Scalar(Rational(2))).to_string() ==
        "(a + 1)/2");
  CHECK((Scalar(Rational(1)) / (a * b)).to_string() == "1/(a*b)");
  CHECK((Scalar(Rational(1)) / (a + b)).to_string() == "1/(a + b)");
}

TEST_CASE("Scalar specialize") {
  Scalar a = Scalar::param("a");
  Scalar b = Scalar::param("b");
  Scalar s = (a * a + b) / (a + Scalar(Rational(1)));
  std::map<std::string, Rational> at{{"a", Rational(2)}, {"b", Rational(5)}};
  CHECK(s.specialize(at) == Rational(3));
  std::map<std::string, Rational> pole{{"a", Rational(-1)}, {"b", Rational(0)}};
  CHECK_THROWS_AS(s.specialize(pole), Error);
}

TEST_CASE("Scalar collect_params and has_params") {
  Scalar a = Scalar::param("a");
  Scalar s = a / (Scalar::param("b") + Scalar(Rational(1)));
  std::set<std::string> names;
  s.collect_params(names);
  CHECK(names == std::set<std::string>{"a", "b"});
  CHECK(s.has_params());
  CHECK_FALSE(Scalar(Rational(3)).has_params());
}

}  // TEST_SUITE
