#include <doctest.h>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "loopinvar/dependency.hpp"
#include "loopinvar/errors.hpp"
#include "helpers.hpp"

using namespace loopinvar;
using testutil::ctx_of;

namespace {

using EdgeMap = std::map<std::pair<std::size_t, std::size_t>, EdgeLabel>;

// Random straight-line loop over up to `maxv` variables with monomial
// right-hand sides of degree up to 3; optionally probabilistic.
std::string random_program(std::mt19937& gen, std::size_t maxv) {
  static const char* names[] = {"a", "b", "c", "d"};
  std::uniform_int_distribution<std::size_t> nv(1, maxv);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> deg(0, 3);
  std::uniform_int_distribution<int> coeff(1, 3);
  std::size_t n = nv(gen);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  auto term = [&]() {
    std::ostringstream t;
    t << coeff(gen);
    int d = deg(gen);
    for (int i = 0; i < d; ++i) t << "*" << names[pick(gen)];
    return t.str();
  };
  auto rhs = [&]() {
    std::ostringstream r;
    r << term();
    if (coin(gen)) r << " + " << term();
    return r.str();
  };

  auto update = [&]() {
    std::ostringstream u;
    if (n == 1) {
      u << names[0] << " = " << rhs();
    } else {
      u << "(";
      for (std::size_t i = 0; i < n; ++i) u << (i ? ", " : "") << names[i];
      u << ") = ";
      for (std::size_t i = 0; i < n; ++i) u << (i ? ", " : "") << rhs();
    }
    return u.str();
  };

  std::ostringstream src;
  bool prob = coin(gen) == 1;
  src << "while true:\n";
  if (prob) {
    // One weighted choice between two full updates.
    src << "  choose {1/2: " << update() << "} {1/2: " << update() << "}\n";
  } else {
    for (std::size_t i = 0; i < n; ++i)
      src << "  " << names[i] << " = " << rhs() << "\n";
  }
  src << "end\n";
  return src.str();
}

}  // namespace

TEST_SUITE("dependency") {

TEST_CASE("squares dependency graph and partition") {
  MomentContext ctx = ctx_of(testutil::kSquaresSrc);
  DependencyGraph g = build_graph(ctx);  // deterministic -> Recurrence
  CHECK(g.nvars == 3);
  CHECK(g.names == std::vector<std::string>{"z", "x", "y"});
  // Indices: z = 0, x = 1, y = 2.
  EdgeMap want = {
      {{0, 0}, EdgeLabel::L}, {{1, 0}, EdgeLabel::L}, {{1, 1}, EdgeLabel::L},
      {{1, 2}, EdgeLabel::N}, {{2, 0}, EdgeLabel::L}, {{2, 2}, EdgeLabel::N},
  };
  CHECK(g.edges == want);
  CHECK(g.has_edge(1, 2));
  CHECK_FALSE(g.has_edge(0, 1));

  Partition part = partition_variables(g);
  CHECK(part.effective == std::set<std::size_t>{0});
  CHECK(part.defective == std::set<std::size_t>{1, 2});

  auto [solvable, p2] = is_solvable(ctx);
  CHECK_FALSE(solvable);
  CHECK(p2.defective == part.defective);
  CHECK_FALSE(brute_force_solvable(ctx));
}

TEST_CASE("squares-and-cube: everything is dragged into the defective set") {
  MomentContext ctx = ctx_of(testutil::kSquaresAndCubeSrc);
  DependencyGraph g = build_graph(ctx);
  CHECK(g.names == std::vector<std::string>{"w", "x", "y"});
  // After expansion w reads x, y linearly; x and y read x, y nonlinearly.
  EdgeMap want = {
      {{0, 1}, EdgeLabel::L}, {{0, 2}, EdgeLabel::L}, {{1, 1}, EdgeLabel::N},
      {{1, 2}, EdgeLabel::N}, {{2, 1}, EdgeLabel::N}, {{2, 2}, EdgeLabel::N},
  };
  CHECK(g.edges == want);
  Partition part = partition_variables(g);
  CHECK(part.effective.empty());
  CHECK(part.defective == std::set<std::size_t>{0, 1, 2});
  CHECK_FALSE(brute_force_solvable(ctx));
}

TEST_CASE("markov-1 partition") {
  MomentContext ctx = ctx_of(testutil::kMarkov1Src);
  auto [solvable, part] = is_solvable(ctx);
  CHECK_FALSE(solvable);
  CHECK(part.effective == std::set<std::size_t>{0});  // s
  CHECK(part.defective == std::set<std::size_t>{1, 2});
  CHECK_FALSE(brute_force_solvable(ctx));
}

TEST_CASE("solvable programs have an empty defective set") {
  MomentContext ctx = ctx_of(
      "while true:\n  x = 2*x + y\n  y = 3*y\nend\n");
  auto [solvable, part] = is_solvable(ctx);
  CHECK(solvable);
  CHECK(part.defective.empty());
  CHECK(part.effective == std::set<std::size_t>{0, 1});
  CHECK(brute_force_solvable(ctx));

  // Nonlinearity alone is fine when it never closes a cycle: y = x^2 with
  // linear x is solvable.
  MomentContext tri = ctx_of("while true:\n  x = 2*x\n  y = y + x^2\nend\n");
  auto [s2, p2] = is_solvable(tri);
  CHECK(s2);
  CHECK(p2.defective.empty());
  CHECK(brute_force_solvable(tri));
}

TEST_CASE("recurrence mode cancels spurious dependencies") {
  // Sequential updates where the expanded recurrence for y collapses to a
  // constant: x = y; y = x - y reads the fresh x, so R[y] = 0.
  MomentContext ctx = ctx_of("while true:\n  x = y\n  y = x - y\nend\n");
  DependencyGraph rec = build_graph(ctx, DepMode::Recurrence);
  CHECK_FALSE(rec.has_edge(1, 0));
  CHECK_FALSE(rec.has_edge(1, 1));
  // Assignment mode keeps the statement-level reads.
  DependencyGraph as = build_graph(ctx, DepMode::Assignment);
  CHECK(as.has_edge(1, 0));
  CHECK(as.has_edge(1, 1));
  // Auto picks Recurrence for this deterministic program.
  CHECK(build_graph(ctx).edges == rec.edges);
}

TEST_CASE("assignment mode adds self-loops for sometimes-unassigned variables") {
  MomentContext ctx = ctx_of(
      "while true:\n  choose {1/2: x = x + 1} {1/2: y = y + 1}\nend\n");
  DependencyGraph g = build_graph(ctx);  // probabilistic -> Assignment
  CHECK(g.has_edge(0, 0));
  CHECK(g.has_edge(1, 1));
  CHECK(g.edges.at({0, 0}) == EdgeLabel::L);
  CHECK(g.edges.at({1, 1}) == EdgeLabel::L);

  // Draw arguments count toward the draw target.
  MomentContext d = ctx_of(
      "g = 1\nwhile true:\n  g = Uniform(g, 2*g)\n  h = g\nend\n");
  DependencyGraph gd = build_graph(d, DepMode::Assignment);
  CHECK(gd.has_edge(0, 0));
  CHECK(gd.edges.at({0, 0}) == EdgeLabel::L);
  CHECK(gd.has_edge(1, 0));
}

TEST_CASE("nonlinear witnesses count program variables only") {
  // a*x is degree 1 in the program variables when a is a parameter.
  MomentContext ctx = ctx_of(
      "params a\nx = 0\ny = 0\nwhile true:\n  x = a*x + a*a*y\nend\n");
  DependencyGraph g = build_graph(ctx);
  CHECK(g.edges.at({0, 0}) == EdgeLabel::L);
  CHECK(g.edges.at({0, 1}) == EdgeLabel::L);
  auto [solvable, part] = is_solvable(ctx);
  CHECK(solvable);
  CHECK(part.defective.empty());
}

TEST_CASE("effective_monomial") {
  Partition part;
  part.effective = {0};
  part.defective = {1, 2};
  CHECK(effective_monomial({2, 0, 0}, part));
  CHECK(effective_monomial({0, 0, 0}, part));
  CHECK_FALSE(effective_monomial({1, 1, 0}, part));
  CHECK_FALSE(effective_monomial({0, 0, 3}, part));
}

TEST_CASE("brute_force_solvable refuses oversized programs") {
  MomentContext ctx = ctx_of(
      "while true:\n  (a, b, c, d, e, f) = a, b, c, d, e, f\nend\n");
  CHECK_THROWS_AS(brute_force_solvable(ctx), TooLargeError);
  CHECK_NOTHROW(brute_force_solvable(ctx, 6));
}

TEST_CASE("is_solvable agrees with brute force on random programs") {
  std::mt19937 gen(2026);
  int checked = 0;
  for (int t = 0; t < 60; ++t) {
    std::string src = random_program(gen, 3);
    CAPTURE(src);
    MomentContext ctx = ctx_of(src);
    bool fast = is_solvable(ctx).first;
    bool slow = brute_force_solvable(ctx);
    CHECK(fast == slow);
    ++checked;
  }
  CHECK(checked == 60);
}

}  // TEST_SUITE
