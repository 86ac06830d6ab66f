#include <doctest.h>

#include <random>
#include <vector>

#include "loopinvar/errors.hpp"
#include "loopinvar/linalg.hpp"

using namespace loopinvar;

namespace {

Scalar sc(long n, long d = 1) { return Scalar(Rational(n, d)); }

SMat from_rows(const std::vector<std::vector<Scalar>>& rows) {
  SMat m;
  for (const auto& r : rows) m.add_row(r);
  return m;
}

SMat random_rational(std::mt19937& gen, std::size_t r, std::size_t c,
                     int lo = -4, int hi = 4) {
  std::uniform_int_distribution<int> d(lo, hi);
  SMat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = sc(d(gen));
  return m;
}

bool is_zero_vec(const SVec& v) {
  for (const auto& s : v)
    if (!s.is_zero()) return false;
  return true;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("SMat arithmetic") {
  SMat a = from_rows({{sc(1), sc(2)}, {sc(3), sc(4)}});
  SMat i = SMat::identity(2);
  CHECK(a * i == a);
  CHECK(a + a == a.scaled(sc(2)));
  CHECK((a - a) == SMat(2, 2));
  SMat t = a.transpose();
  CHECK(t.at(0, 1) == sc(3));
  SVec v = {sc(1), sc(-1)};
  SVec av = a.apply(v);
  CHECK(av == SVec{sc(-1), sc(-1)});
  CHECK(dot(v, av) == sc(0));
}

TEST_CASE("rref and rank on a known matrix") {
  SMat a = from_rows({{sc(1), sc(2), sc(3)},
                      {sc(2), sc(4), sc(6)},
                      {sc(0), sc(1), sc(1)}});
  CHECK(rank_of(a) == 2);
  SMat b = a;
  auto pivots = rref_in_place(b);
  CHECK(pivots == std::vector<std::size_t>{0, 1});
  // RREF of the rank-2 system: x + z = r, y + z = s pattern.
  CHECK(b.at(0, 0) == sc(1));
  CHECK(b.at(0, 1) == sc(0));
  CHECK(b.at(0, 2) == sc(1));
  CHECK(b.at(1, 1) == sc(1));
  CHECK(b.at(1, 2) == sc(1));
  CHECK(is_zero_vec(b.row(2)));
}

TEST_CASE("kernel_basis canonical output") {
  SMat a = from_rows({{sc(1), sc(2), sc(3)}});
  auto k = kernel_basis(a);
  REQUIRE(k.size() == 2);
  CHECK(k[0] == SVec{sc(2), sc(-1), sc(0)});
  CHECK(k[1] == SVec{sc(3), sc(0), sc(-1)});
  for (const auto& v : k) CHECK(is_zero_vec(a.apply(v)));

  // Scaling rows or adding redundant rows leaves the canonical kernel
  // unchanged.
  SMat b = from_rows({{sc(2), sc(4), sc(6)},
                      {sc(1), sc(2), sc(3)},
                      {sc(3), sc(6), sc(9)}});
  CHECK(kernel_basis(b) == k);
}

TEST_CASE("rank-nullity on random rational matrices") {
  std::mt19937 gen(5);
  std::uniform_int_distribution<std::size_t> rd(1, 5), cd(1, 6);
  for (int t = 0; t < 30; ++t) {
    SMat a = random_rational(gen, rd(gen), cd(gen));
    auto k = kernel_basis(a);
    CHECK(rank_of(a) + k.size() == a.cols());
    for (const auto& v : k) CHECK(is_zero_vec(a.apply(v)));
  }
}

TEST_CASE("normalize_primitive") {
  SVec v = {sc(0), sc(-2, 3), sc(4, 3)};
  CHECK(normalize_primitive(v) == SVec{sc(0), sc(1), sc(-2)});
  SVec w = {sc(1, 2), sc(1, 3)};
  CHECK(normalize_primitive(w) == SVec{sc(3), sc(2)});
  // Parametric entries: content and sign come from the leading coefficient.
  Scalar a = Scalar::param("a");
  SVec p = {a * sc(-2), sc(-4)};
  SVec n = normalize_primitive(p);
  CHECK(n == SVec{a, sc(2)});
}

TEST_CASE("parametric kernel matches the symbolic solution") {
  Scalar a = Scalar::param("a");
  Scalar b = Scalar::param("b");
  SMat m = from_rows({{a, b}});
  auto k = kernel_basis(m);
  REQUIRE(k.size() == 1);
  CHECK(k[0] == SVec{b, -a});
  CHECK(m.apply(k[0])[0].is_zero());
}

TEST_CASE("parametric kernel agrees with specialization") {
  std::mt19937 gen(17);
  std::uniform_int_distribution<int> cd(-3, 3);
  Scalar a = Scalar::param("a");
  std::map<std::string, Rational> at{{"a", Rational(5)}};
  for (int t = 0; t < 12; ++t) {
    std::size_t rows = 2 + t % 2, cols = 3 + t % 2;
    SMat m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        m.at(i, j) = sc(cd(gen)) + a * sc(cd(gen));
    auto k = kernel_basis(m);
    CHECK(rank_of(m) + k.size() == cols);
    for (const auto& v : k) {
      SVec mv = m.apply(v);
      CHECK(is_zero_vec(mv));
      // Specializing the symbolic kernel vector stays in the specialized
      // kernel.
      SMat ms(rows, cols);
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
          ms.at(i, j) = Scalar(m.at(i, j).specialize(at));
      SVec vs;
      for (const auto& s : v) vs.push_back(Scalar(s.specialize(at)));
      CHECK(is_zero_vec(ms.apply(vs)));
    }
  }
}

TEST_CASE("kernel_basis_tall equals kernel_basis") {
  std::mt19937 gen(29);
  for (int t = 0; t < 6; ++t) {
    SMat tall = random_rational(gen, 20, 4, -3, 3);
    CHECK(kernel_basis_tall(tall) == kernel_basis(tall));
  }
  // Parametric tall matrix: rows are random combinations of two base rows.
  Scalar a = Scalar::param("a");
  SVec r1 = {sc(1), a, sc(0), sc(2)};
  SVec r2 = {sc(0), sc(1), a, sc(-1)};
  std::uniform_int_distribution<int> cd(-2, 2);
  SMat tall;
  for (int i = 0; i < 14; ++i) {
    SVec row(4);
    Scalar c1 = sc(cd(gen)), c2 = sc(cd(gen));
    for (int j = 0; j < 4; ++j) row[j] = c1 * r1[j] + c2 * r2[j];
    tall.add_row(row);
  }
  auto kt = kernel_basis_tall(tall);
  auto kk = kernel_basis(tall);
  CHECK(kt == kk);
  for (const auto& v : kt) CHECK(is_zero_vec(tall.apply(v)));
}

TEST_CASE("canonical_row_space is basis independent") {
  SVec u = {sc(1), sc(2), sc(0)};
  SVec v = {sc(0), sc(1), sc(1)};
  SVec sum = {sc(1), sc(3), sc(1)};
  SVec diff = {sc(2), sc(3), sc(-1)};
  auto c1 = canonical_row_space({u, v});
  auto c2 = canonical_row_space({sum, diff});
  auto c3 = canonical_row_space({v, u, sum});
  CHECK(c1 == c2);
  CHECK(c1 == c3);
  REQUIRE(c1.size() == 2);
  CHECK(canonical_row_space({SVec{sc(0), sc(0)}}).empty());
  CHECK(canonical_row_space({}).empty());
}

TEST_CASE("in_span") {
  std::vector<SVec> basis = {{sc(1), sc(0), sc(1)}, {sc(0), sc(1), sc(2)}};
  CHECK(in_span(basis, {sc(2), sc(3), sc(8)}));
  CHECK(in_span(basis, {sc(0), sc(0), sc(0)}));
  CHECK_FALSE(in_span(basis, {sc(0), sc(0), sc(1)}));
}

TEST_CASE("solve_linear and solve_square") {
  SMat a = from_rows({{sc(1), sc(1)}, {sc(1), sc(-1)}});
  SVec x = solve_square(a, {sc(3), sc(1)});
  CHECK(x == SVec{sc(2), sc(1)});

  SMat sing = from_rows({{sc(1), sc(2)}, {sc(2), sc(4)}});
  CHECK_THROWS_AS(solve_square(sing, {sc(1), sc(1)}), Error);

  auto sol = solve_linear(sing, {sc(3), sc(6)});
  REQUIRE(sol.has_value());
  CHECK(a.rows() == 2);
  CHECK((sing.apply(*sol) == SVec{sc(3), sc(6)}));
  CHECK_FALSE(solve_linear(sing, {sc(1), sc(1)}).has_value());
}

TEST_CASE("independent_rows") {
  SMat a = from_rows({{sc(1), sc(2)},
                      {sc(2), sc(4)},
                      {sc(0), sc(1)},
                      {sc(1), sc(3)}});
  CHECK(independent_rows(a) == std::vector<std::size_t>{0, 2});
}

TEST_CASE("char_poly of a known matrix") {
  SMat a = from_rows({{sc(1), sc(1, 6)}, {sc(1, 2), sc(4, 3)}});
  SUniPoly p = char_poly(a);
  REQUIRE(p.coeffs().size() == 3);
  CHECK(p.coeffs()[0] == sc(5, 4));
  CHECK(p.coeffs()[1] == sc(-7, 3));
  CHECK(p.coeffs()[2] == sc(1));
  auto roots = rational_roots(p);
  REQUIRE(roots.roots.size() == 2);
  CHECK(roots.roots[0].first == Rational(5, 6));
  CHECK(roots.roots[1].first == Rational(3, 2));
}

TEST_CASE("char_poly with parameters") {
  Scalar a = Scalar::param("a");
  SMat m = from_rows({{a}});
  SUniPoly p = char_poly(m);
  REQUIRE(p.coeffs().size() == 2);
  CHECK(p.coeffs()[0] == -a);
  CHECK(p.coeffs()[1] == sc(1));
}

TEST_CASE("Cayley-Hamilton on random matrices") {
  std::mt19937 gen(41);
  for (int t = 0; t < 4; ++t) {
    std::size_t n = 3 + t % 2;
    SMat a = random_rational(gen, n, n, -3, 3);
    SUniPoly p = char_poly(a);
    // Evaluate p at A by Horner.
    SMat acc(n, n);
    for (std::size_t k = p.coeffs().size(); k-- > 0;) {
      acc = acc * a;
      SMat c = SMat::identity(n).scaled(p.coeffs()[k]);
      acc = acc + c;
    }
    CHECK(acc == SMat(n, n));
  }
}

}  // TEST_SUITE
