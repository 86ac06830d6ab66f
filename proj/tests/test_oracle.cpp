#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "loopinvar/errors.hpp"
#include "loopinvar/oracle.hpp"
#include "helpers.hpp"

using namespace loopinvar;
using testutil::ctx_of;

namespace {

Scalar sc(long n, long d = 1) { return Scalar(Rational(n, d)); }

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("unroll_expectation on squares") {
  MomentContext ctx = ctx_of(testutil::kSquaresSrc);
  Polynomial s = Polynomial::variable(3, 1) + Polynomial::variable(3, 2);
  Scalar x0 = Scalar::param("x0"), y0 = Scalar::param("y0");
  CHECK(unroll_expectation(ctx, s, 0) == x0 + y0);
  // One iteration: x + y maps to 2x + 2y - 3z + 3 and z starts at 0.
  CHECK(unroll_expectation(ctx, s, 1) == sc(2) * (x0 + y0) + sc(3));
  // Against the known closed form 2^n (x0 + y0 + 2) - (-1)^n/2 - 3/2.
  for (unsigned long n = 0; n <= 5; ++n) {
    Scalar pow2 = sc(1L << n);
    Scalar alt = sc(n % 2 == 0 ? 1 : -1);
    Scalar want = pow2 * (x0 + y0 + sc(2)) - alt * sc(1, 2) - sc(3, 2);
    CHECK(unroll_expectation(ctx, s, n) == want);
  }
}

TEST_CASE("unroll_expectation averages probabilistic branches") {
  MomentContext ctx = ctx_of(testutil::kMarkov1Src);
  Polynomial diff = Polynomial::variable(3, 1) - Polynomial::variable(3, 2);
  Scalar d0 = Scalar::param("x0") - Scalar::param("y0");
  for (unsigned long n = 0; n <= 4; ++n)
    CHECK(unroll_expectation(ctx, diff, n) == sc(5, 6).pow(n) * d0);
}

TEST_CASE("unroll_expectation respects the term budget") {
  MomentContext ctx = ctx_of(testutil::kSquaresSrc);
  Polynomial cube = Polynomial::variable(3, 1, 3) * Polynomial::variable(3, 2, 3);
  CHECK_THROWS_AS(unroll_expectation(ctx, cube, 6, 50), BudgetExceededError);
}

TEST_CASE("check_invariant passes on synthesized invariants") {
  MomentContext ctx = ctx_of(testutil::kSquaresSrc);
  SynthesisResult res = synthesize(ctx, 1);
  REQUIRE(res.invariants.size() == 1);
  CheckReport rep = check_invariant(ctx, res.invariants[0], 8);
  CHECK(rep.pass);
  CHECK(rep.weights.empty());
  REQUIRE(rep.assignments.size() == 1);
  CHECK(rep.assignments[0].empty());
  REQUIRE(rep.entries.size() == 9);  // n = 0..8
  for (const auto& e : rep.entries) {
    CHECK(e.equal);
    CHECK(e.expected == e.actual);
    CHECK(e.assignment == 0);
  }
}

TEST_CASE("check_invariant instantiates free weights") {
  MomentContext ctx = ctx_of(testutil::kSquaresAndCubeSrc);
  SynthesisResult res = synthesize(ctx, 2);
  REQUIRE(res.invariants.size() == 1);
  const Invariant& inv = res.invariants[0];
  REQUIRE(inv.weights.size() == 3);
  CheckReport rep = check_invariant(ctx, inv, 6);
  CHECK(rep.pass);
  CHECK(rep.weights == inv.weights);
  REQUIRE(rep.assignments.size() == 3);
  CHECK(rep.assignments[0] ==
        std::vector<Rational>{Rational(1), Rational(1), Rational(1)});
  CHECK(rep.assignments[1] ==
        std::vector<Rational>{Rational(1), Rational(2), Rational(3)});
  CHECK(rep.assignments[2] ==
        std::vector<Rational>{Rational(-1, 2), Rational(1, 3), Rational(-1, 4)});
  // valid_from = 1, so n = 1..6 for each of the three assignments.
  CHECK(rep.entries.size() == 3 * 6);
  for (const auto& e : rep.entries) CHECK(e.equal);
}

TEST_CASE("check_invariant flags a corrupted closed form") {
  MomentContext ctx = ctx_of(testutil::kSquaresSrc);
  SynthesisResult res = synthesize(ctx, 1);
  Invariant bad = res.invariants[0];
  bad.closed_form = bad.closed_form + ExpPoly::constant(sc(1));
  CheckReport rep = check_invariant(ctx, bad, 5);
  CHECK_FALSE(rep.pass);
  bool any_bad = false;
  for (const auto& e : rep.entries)
    if (!e.equal) {
      any_bad = true;
      CHECK(e.expected != e.actual);
    }
  CHECK(any_bad);
}

TEST_CASE("monte_carlo is exact on deterministic loops") {
  MomentContext ctx = ctx_of(testutil::kSquaresSrc);
  Polynomial s = Polynomial::variable(3, 1) + Polynomial::variable(3, 2);
  std::map<std::string, double> val{{"x", 2.0}, {"y", 3.0}};
  MonteCarloResult mc = monte_carlo(ctx, s, 4, 16, 7, val);
  // 2^4 * (2 + 3 + 2) - 1/2 - 3/2 = 110.
  CHECK(mc.estimate == doctest::Approx(110.0).epsilon(1e-12));
  CHECK(mc.std_error == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("monte_carlo approximates probabilistic expectations") {
  MomentContext ctx = ctx_of(
      "x = 0\nwhile true:\n  x = x + 1 {1/4} x - 1\nend\n");
  // E[x(n)] = -n/2: each step adds 1 w.p. 1/4 and subtracts 1 w.p. 3/4.
  Polynomial x = Polynomial::variable(1, 0);
  MonteCarloResult mc = monte_carlo(ctx, x, 6, 20000, 123);
  CHECK(mc.std_error > 0.0);
  CHECK(std::abs(mc.estimate - (-3.0)) < 6.0 * mc.std_error + 1e-9);

  // Agreement with the exact oracle for a drawn quantity.
  MomentContext g = ctx_of("g = 1\nwhile true:\n  g = Uniform(g, 2*g)\nend\n");
  Polynomial gp = Polynomial::variable(1, 0);
  Scalar exact = unroll_expectation(g, gp, 5);
  CHECK(exact == sc(3, 2).pow(5));
  MonteCarloResult gmc = monte_carlo(g, gp, 5, 20000, 9);
  double ref = mpq_class(exact.rational_value()).get_d();
  CHECK(std::abs(gmc.estimate - ref) < 6.0 * gmc.std_error + 1e-9);
}

TEST_CASE("unroll agrees with closed forms on a parametric program") {
  MomentContext ctx = ctx_of(testutil::kProbSquaresSrc);
  SynthesisResult res = synthesize(ctx, 1);
  REQUIRE(res.invariants.size() == 1);
  const Invariant& inv = res.invariants[0];
  for (unsigned long n = 0; n <= 5; ++n)
    CHECK(unroll_expectation(ctx, inv.s_poly, n) == inv.closed_form.eval(n));
}

}  // TEST_SUITE
