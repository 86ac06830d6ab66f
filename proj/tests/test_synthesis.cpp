#include <doctest.h>

#include <map>
#include <set>
#include <vector>

#include "loopinvar/errors.hpp"
#include "loopinvar/synthesis.hpp"
#include "helpers.hpp"

using namespace loopinvar;
using testutil::ctx_of;

namespace {

Scalar sc(long n, long d = 1) { return Scalar(Rational(n, d)); }

Partition part_of(const MomentContext& ctx) { return is_solvable(ctx).second; }

}  // namespace

TEST_SUITE("synthesis") {

TEST_CASE("candidate_monomials enumerates in canonical order") {
  Partition part;
  part.effective = {0};
  part.defective = {1, 2};
  auto pure = candidate_monomials(3, part, 2, CandMode::Pure);
  std::vector<Monomial> want = {
      {0, 1, 0}, {0, 0, 1}, {0, 2, 0}, {0, 1, 1}, {0, 0, 2}};
  CHECK(pure == want);
  auto full = candidate_monomials(3, part, 2, CandMode::Full);
  std::vector<Monomial> want_full = {{0, 1, 0}, {0, 0, 1}, {1, 1, 0},
                                     {1, 0, 1}, {0, 2, 0}, {0, 1, 1},
                                     {0, 0, 2}};
  CHECK(full == want_full);
}

TEST_CASE("candidate_count matches the enumeration") {
  for (std::size_t nvars = 1; nvars <= 4; ++nvars) {
    for (std::size_t ndef = 1; ndef <= nvars; ++ndef) {
      Partition part;
      for (std::size_t i = 0; i < nvars; ++i)
        (i < ndef ? part.defective : part.effective).insert(i);
      for (Exp d = 1; d <= 4; ++d) {
        for (CandMode mode : {CandMode::Pure, CandMode::Full}) {
          CHECK(candidate_count(nvars, part, d, mode) ==
                candidate_monomials(nvars, part, d, mode).size());
        }
      }
    }
  }
  // The degree-7 pure counts used by the benchmark sweep.
  Partition two;
  two.defective = {0, 1};
  CHECK(candidate_count(2, two, 7, CandMode::Pure) == 35);
  Partition five;
  five.defective = {0, 1, 2, 3, 4};
  CHECK(candidate_count(5, five, 7, CandMode::Pure) == 791);
}

TEST_CASE("no defective variables is an explicit error") {
  MomentContext ctx = ctx_of("while true:\n  x = 2*x + 1\nend\n");
  Partition part = part_of(ctx);
  REQUIRE(part.defective.empty());
  CHECK_THROWS_AS(candidate_monomials(1, part, 2, CandMode::Pure),
                  NoDefectiveVariablesError);
  CHECK_THROWS_AS(synthesize(ctx, 2), NoDefectiveVariablesError);
}

TEST_CASE("constraint matrices for markov-1 at degree 1") {
  MomentContext ctx = ctx_of(testutil::kMarkov1Src);
  Partition part = part_of(ctx);
  ConstraintSystem sys = constraint_matrices(ctx, part, 1, CandMode::Pure);
  std::vector<Monomial> cand = {{0, 1, 0}, {0, 0, 1}};  // x, y
  CHECK(sys.candidate == cand);
  // R[x] = x + y/2 + (5/6)xy, R[y] = x/6 + (4/3)y + (5/6)xy.
  REQUIRE(sys.a_cand.rows() == 2);
  CHECK(sys.a_cand.at(0, 0) == sc(1));
  CHECK(sys.a_cand.at(0, 1) == sc(1, 6));
  CHECK(sys.a_cand.at(1, 0) == sc(1, 2));
  CHECK(sys.a_cand.at(1, 1) == sc(4, 3));
  REQUIRE(sys.extra.size() == 1);
  CHECK(sys.extra[0] == Monomial{0, 1, 1});
  CHECK(sys.a_extra.at(0, 0) == sc(5, 6));
  CHECK(sys.a_extra.at(0, 1) == sc(5, 6));
  REQUIRE(sys.effective_parts.size() == 2);
  CHECK(sys.effective_parts[0].is_zero());
  CHECK(sys.effective_parts[1].is_zero());

  auto spaces = solve_solution_space(sys);
  REQUIRE(spaces.size() == 1);
  CHECK(spaces[0].kappa == Rational(5, 6));
  REQUIRE(spaces[0].basis.size() == 1);
  CHECK(spaces[0].basis[0] == SVec{sc(1), sc(-1)});
}

TEST_CASE("synthesize squares at degree 1") {
  MomentContext ctx = ctx_of(testutil::kSquaresSrc);
  SynthesisResult res = synthesize(ctx, 1);
  CHECK(res.degree == 1);
  CHECK(res.equation_count == 1);
  CHECK(res.candidate == std::vector<Monomial>{{0, 1, 0}, {0, 0, 1}});
  REQUIRE(res.spaces.size() == 1);
  CHECK(res.spaces[0].kappa == Rational(2));
  CHECK(res.has_exact_degree);
  REQUIRE(res.invariants.size() == 1);
  const Invariant& inv = res.invariants[0];
  CHECK(inv.kappa == Rational(2));
  CHECK(inv.coefficients == SVec{sc(1), sc(1)});
  CHECK(inv.weights.empty());
  CHECK(inv.space_dim == 1);
  CHECK(inv.s_poly.to_string({"z", "x", "y"}) == "x + y");
  CHECK(inv.initial_value == Scalar::param("x0") + Scalar::param("y0"));
  CHECK(inv.valid_from == 0);
  CHECK_FALSE(inv.expectation);  // deterministic: exact value
  CHECK(inv.closed_form.to_string() == "2^n*(x0 + y0 + 2) - (-1)^n/2 - 3/2");
  // The closed form reproduces the recurrence S(n+1) = 2 S(n) - 3 z(n) + 3
  // with z(n) = 1/2 - (-1)^n/2.
  for (unsigned long n = 0; n + 1 <= 6; ++n) {
    Scalar z = sc(n % 2 == 0 ? 0 : 1);
    CHECK(inv.closed_form.eval(n + 1) ==
          sc(2) * inv.closed_form.eval(n) - sc(3) * z + sc(3));
  }
}

TEST_CASE("squares at degree 2 has no exact-degree invariant") {
  MomentContext ctx = ctx_of(testutil::kSquaresSrc);
  SynthesisResult res = synthesize(ctx, 2);
  CHECK(res.candidate.size() == 5);
  CHECK_FALSE(res.has_exact_degree);
  // The degree-1 eigenvector still shows up inside the degree-2 listing.
  REQUIRE(res.spaces.size() == 1);
  CHECK(res.spaces[0].kappa == Rational(2));
  REQUIRE(res.spaces[0].basis.size() == 1);
  CHECK(res.spaces[0].basis[0] == SVec{sc(1), sc(1), sc(0), sc(0), sc(0)});
}

TEST_CASE("markov-1 eigenvalue ladder") {
  MomentContext ctx = ctx_of(testutil::kMarkov1Src);
  SynthesisResult d2 = synthesize(ctx, 2);
  CHECK(d2.equation_count == 3);
  CHECK(d2.candidate.size() == 5);
  REQUIRE(d2.spaces.size() == 2);
  // kappa ascending.
  CHECK(d2.spaces[0].kappa == Rational(13, 18));
  CHECK(d2.spaces[1].kappa == Rational(5, 6));
  CHECK(d2.spaces[0].basis[0] ==
        SVec{sc(0), sc(0), sc(1), sc(-2), sc(1)});  // (x - y)^2
  CHECK(d2.spaces[1].basis[0] == SVec{sc(1), sc(-1), sc(0), sc(0), sc(0)});
  CHECK(d2.has_exact_degree);
  REQUIRE(d2.invariants.size() == 2);
  CHECK(d2.invariants[0].kappa == Rational(13, 18));
  CHECK(d2.invariants[0].expectation);
  CHECK(d2.invariants[0].closed_form ==
        ExpPoly::geometric(Rational(13, 18),
                           (Scalar::param("x0") - Scalar::param("y0")).pow(2)));

  SynthesisResult d3 = synthesize(ctx, 3);
  CHECK(d3.candidate.size() == 9);
  CHECK(d3.equation_count == 6);
  REQUIRE(d3.spaces.size() == 3);
  CHECK(d3.spaces[0].kappa == Rational(35, 54));
  CHECK(d3.spaces[1].kappa == Rational(13, 18));
  CHECK(d3.spaces[2].kappa == Rational(5, 6));
  CHECK(d3.invariants[0].closed_form ==
        ExpPoly::geometric(Rational(35, 54),
                           (Scalar::param("x0") - Scalar::param("y0")).pow(3)));
}

TEST_CASE("parametric program: prob-squares") {
  MomentContext ctx = ctx_of(testutil::kProbSquaresSrc);
  SynthesisResult res = synthesize(ctx, 1);
  CHECK(res.candidate.size() == 3);
  CHECK(res.equation_count == 2);
  REQUIRE(res.invariants.size() == 1);
  const Invariant& inv = res.invariants[0];
  CHECK(inv.kappa == Rational(1));
  CHECK(inv.coefficients == SVec{sc(1), sc(1), sc(2)});
  CHECK(inv.expectation);
  CHECK(inv.initial_value ==
        Scalar::param("a0") + Scalar::param("b0") + sc(2) * Scalar::param("c0"));
  CHECK(inv.closed_form.to_string() ==
        "6*(3/2)^n + (a0 + b0 + 2*c0 - 6)");
}

TEST_CASE("kappa = 0 with weights: squares-and-cube at degree 2") {
  MomentContext ctx = ctx_of(testutil::kSquaresAndCubeSrc);
  SynthesisResult d1 = synthesize(ctx, 1);
  CHECK(d1.candidate.size() == 3);
  CHECK(d1.equation_count == 7);
  CHECK(d1.spaces.empty());
  CHECK(d1.invariants.empty());
  CHECK_FALSE(d1.has_exact_degree);

  SynthesisResult d2 = synthesize(ctx, 2);
  CHECK(d2.candidate.size() == 9);
  CHECK(d2.equation_count == 22);
  REQUIRE(d2.spaces.size() == 1);
  CHECK(d2.spaces[0].kappa == Rational(0));
  REQUIRE(d2.spaces[0].basis.size() == 3);
  CHECK(d2.has_exact_degree);
  REQUIRE(d2.invariants.size() == 1);
  const Invariant& inv = d2.invariants[0];
  CHECK(inv.space_dim == 3);
  CHECK(inv.weights.size() == 3);
  CHECK(inv.valid_from == 1);
  CHECK(inv.closed_form.is_zero());
  // The three relations w^2 = x, w x = y, x^2 = w y hold from n = 1 on;
  // their coefficient vectors span the solution space. Candidates are
  // [w, x, y, w^2, wx, wy, x^2, xy, y^2].
  auto vec = [&](std::map<std::size_t, long> entries) {
    SVec v(9, sc(0));
    for (auto [i, c] : entries) v[i] = sc(c);
    return v;
  };
  CHECK(in_span(d2.spaces[0].basis, vec({{3, 1}, {1, -1}})));   // w^2 - x
  CHECK(in_span(d2.spaces[0].basis, vec({{4, 1}, {2, -1}})));   // wx - y
  CHECK(in_span(d2.spaces[0].basis, vec({{6, 1}, {5, -1}})));   // x^2 - wy
  CHECK_FALSE(in_span(d2.spaces[0].basis, vec({{0, 1}})));
}

TEST_CASE("weight names avoid program symbols") {
  MomentContext ctx = ctx_of(
      "while true:\n  w1 = x + y\n  x = w1^2\n  y = w1^3\nend\n");
  SynthesisResult res = synthesize(ctx, 2);
  REQUIRE(res.invariants.size() == 1);
  const Invariant& inv = res.invariants[0];
  REQUIRE(inv.weights.size() == 3);
  std::set<std::string> names(inv.weights.begin(), inv.weights.end());
  CHECK(names.size() == 3);
  CHECK_FALSE(names.count("w1"));
}

TEST_CASE("deterministic cumulative sums: squares-squared shape") {
  // m accumulates the squares sum S = x + y + 2z; R[S] = 3S exactly, so
  // S, S^2, S^3 are all eigenvectors.
  MomentContext ctx = ctx_of(
      "while true:\n  (x, y, z, m) = x*y*z + x^2, 2*y + z - x^2 + 3*y*m*z^2, "
      "(3/2)*x + (3/2)*z + (1/2)*y + (1/2)*x^2, (2/3)*z + 3*m - (1/3)*x^2 - "
      "(1/3)*x*y*z - y*m*z^2\nend\n");
  SynthesisResult d1 = synthesize(ctx, 1);
  REQUIRE(d1.spaces.size() == 1);
  CHECK(d1.spaces[0].kappa == Rational(3));
  CHECK(d1.invariants[0].coefficients == SVec{sc(1), sc(1), sc(2), sc(3)});

  SynthesisResult d2 = synthesize(ctx, 2);
  REQUIRE(d2.spaces.size() == 2);
  CHECK(d2.spaces[0].kappa == Rational(3));
  CHECK(d2.spaces[1].kappa == Rational(9));
  CHECK(d2.has_exact_degree);
}

TEST_CASE("synthesize respects the deadline") {
  MomentContext ctx = ctx_of(testutil::kSquaresSrc);
  Deadline expired = Deadline::after_seconds(-1);
  CHECK_THROWS_AS(synthesize(ctx, 3, CandMode::Pure, expired), TimeoutError);
}

}  // TEST_SUITE
