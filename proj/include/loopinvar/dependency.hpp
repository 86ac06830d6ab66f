#pragma once

// Labelled variable dependency graph, the effective/defective partition,
// and solvability of the induced recurrence operator. An edge (x, y) says
// the update of x reads y; it is labelled N when some witnessing monomial
// containing y has total degree at least two in the program variables
// (parameters do not count), L otherwise. A variable is defective exactly
// when a nonlinear edge closes a cycle through it, and everything that
// feeds such a variable is dragged along.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "loopinvar/moments.hpp"

namespace loopinvar {

enum class EdgeLabel { L, N };

struct DependencyGraph {
  std::size_t nvars = 0;
  std::vector<std::string> names;
  /// (x, y) -> label: x depends on y.
  std::map<std::pair<std::size_t, std::size_t>, EdgeLabel> edges;

  bool has_edge(std::size_t x, std::size_t y) const {
    return edges.count({x, y}) != 0;
  }
};

/// How to read dependencies off the program.
///  - Recurrence: from the expanded recurrence operator (cancellation
///    removes spurious edges); the right reading for deterministic loops.
///  - Assignment: from the statement-level right-hand sides across all
///    branches, with draw arguments counting toward the draw target and a
///    self-loop for every variable some path leaves unassigned; the sound
///    reading for probabilistic loops.
///  - Auto: Assignment for probabilistic programs, Recurrence otherwise.
enum class DepMode { Auto, Recurrence, Assignment };

DependencyGraph build_graph(const MomentContext& ctx, DepMode mode = DepMode::Auto);

struct Partition {
  std::set<std::size_t> effective;
  std::set<std::size_t> defective;
};

/// Effective/defective split of the graph's variables.
Partition partition_variables(const DependencyGraph& g);

/// True when every variable the monomial mentions is effective.
bool effective_monomial(const Monomial& m, const Partition& part);

/// Solvability of the recurrence operator: solvable iff no variable is
/// defective. Returns the verdict together with the partition.
std::pair<bool, Partition> is_solvable(const MomentContext& ctx,
                                       DepMode mode = DepMode::Auto);

/// Ground-truth solvability by enumerating every ordered partition of the
/// variables into blocks and checking the block-triangular shape of the
/// recurrences directly. Exponential; refuses more than max_vars
/// variables (TooLargeError).
bool brute_force_solvable(const MomentContext& ctx, std::size_t max_vars = 5);

}  // namespace loopinvar
