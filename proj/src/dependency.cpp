#include "loopinvar/dependency.hpp"

#include <functional>

#include "loopinvar/errors.hpp"

namespace loopinvar {

namespace {

void note_edge(DependencyGraph& g, std::size_t x, std::size_t y, EdgeLabel label) {
  auto [it, fresh] = g.edges.try_emplace({x, y}, label);
  if (!fresh && label == EdgeLabel::N) it->second = EdgeLabel::N;
}

/// Edges x -> every variable of p, N-labelled when the witnessing monomial
/// is nonlinear in the program variables.
void edges_from_poly(DependencyGraph& g, std::size_t x, const Polynomial& p) {
  for (const auto& [m, c] : p.terms()) {
    EdgeLabel label = mono_degree(m) >= 2 ? EdgeLabel::N : EdgeLabel::L;
    for (std::size_t y = 0; y < m.size(); ++y)
      if (m[y] > 0) note_edge(g, x, y, label);
  }
}

void assignment_edges(DependencyGraph& g, const MomentContext& ctx,
                      const std::vector<Stmt>& stmts) {
  const Program& p = ctx.program();
  for (const auto& s : stmts) {
    switch (s.kind) {
      case Stmt::Kind::Assign:
        for (std::size_t i = 0; i < s.targets.size(); ++i)
          edges_from_poly(g, p.var_index.at(s.targets[i]),
                          lower_expr(s.rhs[i].main, p));
        break;
      case Stmt::Kind::Draw: {
        std::size_t v = p.var_index.at(s.targets[0]);
        for (const auto& a : s.args) edges_from_poly(g, v, lower_expr(a, p));
        break;
      }
      case Stmt::Kind::Choice:
        for (const auto& [prob, branch] : s.branches)
          assignment_edges(g, ctx, branch);
        break;
      case Stmt::Kind::If:
        throw Error("dependency graph requires a desugared program (if found)");
    }
  }
}

/// For every variable, whether some execution path leaves it unassigned.
std::vector<bool> sometimes_unassigned(const Program& p) {
  std::vector<bool> result(p.vars.size(), false);
  std::function<std::vector<std::set<std::size_t>>(const std::vector<Stmt>&)>
      paths = [&](const std::vector<Stmt>& stmts) {
        std::vector<std::set<std::size_t>> acc = {{}};
        for (const auto& s : stmts) {
          std::vector<std::set<std::size_t>> here;
          if (s.kind == Stmt::Kind::Choice) {
            for (const auto& [prob, branch] : s.branches)
              for (auto& set : paths(branch)) here.push_back(std::move(set));
          } else {
            std::set<std::size_t> t;
            for (const auto& name : s.targets) t.insert(p.var_index.at(name));
            here.push_back(std::move(t));
          }
          std::vector<std::set<std::size_t>> next;
          for (const auto& left : acc)
            for (const auto& right : here) {
              std::set<std::size_t> merged = left;
              merged.insert(right.begin(), right.end());
              next.push_back(std::move(merged));
            }
          acc = std::move(next);
        }
        return acc;
      };
  for (const auto& assigned : paths(p.body))
    for (std::size_t v = 0; v < p.vars.size(); ++v)
      if (!assigned.count(v)) result[v] = true;
  return result;
}

}  // namespace

DependencyGraph build_graph(const MomentContext& ctx, DepMode mode) {
  const Program& p = ctx.program();
  DependencyGraph g;
  g.nvars = p.vars.size();
  g.names = p.vars;
  if (mode == DepMode::Auto)
    mode = p.probabilistic ? DepMode::Assignment : DepMode::Recurrence;

  if (mode == DepMode::Recurrence) {
    for (std::size_t x = 0; x < g.nvars; ++x) {
      Monomial m(g.nvars, 0);
      m[x] = 1;
      edges_from_poly(g, x, ctx.recurrence_of(m));
    }
    return g;
  }

  assignment_edges(g, ctx, p.body);
  std::vector<bool> carries = sometimes_unassigned(p);
  for (std::size_t v = 0; v < g.nvars; ++v)
    if (carries[v]) note_edge(g, v, v, EdgeLabel::L);
  return g;
}

Partition partition_variables(const DependencyGraph& g) {
  std::size_t n = g.nvars;
  // reach[u][v]: a path of length >= 1 from u to v along dependency arcs.
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (const auto& [edge, label] : g.edges) reach[edge.first][edge.second] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (reach[k][j]) reach[i][j] = true;
    }

  Partition part;
  std::vector<bool> defective(n, false);
  for (const auto& [edge, label] : g.edges) {
    if (label != EdgeLabel::N) continue;
    auto [x, y] = edge;
    // The nonlinear edge must lie on a cycle through y.
    if (x != y && !reach[y][x]) continue;
    defective[y] = true;
    for (std::size_t u = 0; u < n; ++u)
      if (reach[u][y]) defective[u] = true;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (defective[v]) {
      part.defective.insert(v);
    } else {
      part.effective.insert(v);
    }
  }
  return part;
}

bool effective_monomial(const Monomial& m, const Partition& part) {
  for (std::size_t v = 0; v < m.size(); ++v) {
    if (m[v] > 0 && part.defective.count(v) != 0) return false;
  }
  return true;
}

std::pair<bool, Partition> is_solvable(const MomentContext& ctx, DepMode mode) {
  Partition part = partition_variables(build_graph(ctx, mode));
  return {part.defective.empty(), part};
}

bool brute_force_solvable(const MomentContext& ctx, std::size_t max_vars) {
  std::size_t n = ctx.nvars();
  if (n > max_vars)
    throw TooLargeError("brute-force solvability limited to " +
                        std::to_string(max_vars) + " variables");
  if (n == 0) return true;

  std::vector<Polynomial> rec;
  rec.reserve(n);
  for (std::size_t x = 0; x < n; ++x) {
    Monomial m(n, 0);
    m[x] = 1;
    rec.push_back(ctx.recurrence_of(m));
  }

  // block_of[v] in 1..n; blocks numbered contiguously in order of first use.
  std::vector<std::size_t> block_of(n, 0);
  std::function<bool(std::size_t, std::size_t)> place = [&](std::size_t v,
                                                            std::size_t used) {
    if (v == n) {
      // Check the block-triangular shape: R[x] for x in block j is a
      // constant-coefficient linear form over block j plus a polynomial
      // over strictly earlier blocks.
      for (std::size_t x = 0; x < n; ++x) {
        std::size_t j = block_of[x];
        for (const auto& [m, c] : rec[x].terms()) {
          bool ok = true;
          bool linear_own = false;
          if (mono_degree(m) == 1) {
            for (std::size_t y = 0; y < n; ++y)
              if (m[y] == 1 && block_of[y] == j) linear_own = true;
          }
          if (!linear_own) {
            for (std::size_t y = 0; y < n; ++y)
              if (m[y] > 0 && block_of[y] >= j) ok = false;
          }
          if (!ok) return false;
        }
      }
      return true;
    }
    for (std::size_t b = 1; b <= used + 1 && b <= n; ++b) {
      block_of[v] = b;
      if (place(v + 1, std::max(used, b))) return true;
    }
    return false;
  };
  return place(0, 0);
}

}  // namespace loopinvar
