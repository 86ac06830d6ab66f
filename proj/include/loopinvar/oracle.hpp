#pragma once

// Independent verification of synthesized invariants. The exact oracle
// unrolls the loop symbolically: E[p(state after n iterations)] is the
// initial moment of the n-fold pushforward, computed with exact
// arithmetic and no closed-form machinery. A sampling-based estimator is
// also provided for numeric spot checks.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "loopinvar/deadline.hpp"
#include "loopinvar/moments.hpp"
#include "loopinvar/polynomial.hpp"
#include "loopinvar/synthesis.hpp"

namespace loopinvar {

/// E[p(state after n iterations)], exactly.
Scalar unroll_expectation(const MomentContext& ctx, const Polynomial& p,
                          unsigned long n, std::size_t term_budget = 200000,
                          const Deadline& dl = {});

struct CheckEntry {
  /// Index into CheckReport::assignments (always 0 when there are no
  /// free weights).
  std::size_t assignment = 0;
  unsigned long n = 0;
  /// Closed-form value and independently unrolled moment.
  Scalar expected;
  Scalar actual;
  bool equal = false;
};

struct CheckReport {
  bool pass = true;
  std::vector<std::string> weights;
  /// Weight instantiations tried; a single empty assignment when the
  /// invariant has no free weights.
  std::vector<std::vector<Rational>> assignments;
  std::vector<CheckEntry> entries;
};

/// Compares the invariant's closed form against the exact oracle for
/// n = valid_from .. iterations. Free weights are instantiated at several
/// fixed assignments; parameters and initial-value atoms stay symbolic.
CheckReport check_invariant(const MomentContext& ctx, const Invariant& inv,
                            unsigned long iterations, const Deadline& dl = {});

struct MonteCarloResult {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Samples E[p(state after n iterations)] by simulating the loop.
/// valuation supplies numeric values for parameters and uninitialized
/// variables (missing names default to 0).
MonteCarloResult monte_carlo(const MomentContext& ctx, const Polynomial& p,
                             unsigned long n, std::size_t samples,
                             std::uint64_t seed,
                             const std::map<std::string, double>& valuation = {});

}  // namespace loopinvar
