#pragma once

// Polynomials in the program variables with Scalar coefficients. Variables
// are indices into a fixed declaration-order list; a Monomial is the vector
// of exponents. The canonical term order lists monomials by ascending total
// degree and, within a degree, by descending lexicographic order — the same
// order used for candidate listings and rendered polynomials.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loopinvar/deadline.hpp"
#include "loopinvar/scalar.hpp"

namespace loopinvar {

using Exp = std::uint64_t;
using Monomial = std::vector<Exp>;

/// Total degree (sum of exponents).
Exp mono_degree(const Monomial& m);

/// Canonical listing order: ascending degree, then descending lex.
struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Rendering such as "x^2*y" (empty product renders as "1").
std::string mono_to_string(const Monomial& m, const std::vector<std::string>& names);

class Polynomial {
public:
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}
  static Polynomial constant(std::size_t nvars, const Scalar& c);
  static Polynomial variable(std::size_t nvars, std::size_t idx, Exp e = 1);
  static Polynomial monomial(std::size_t nvars, const Monomial& m, const Scalar& c);

  std::size_t nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant term (the whole value when is_constant()).
  Scalar constant_value() const;

  Polynomial operator-() const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  bool operator==(const Polynomial& o) const {
    return nvars_ == o.nvars_ && terms_ == o.terms_;
  }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  Polynomial scale(const Scalar& c) const;
  Polynomial pow(Exp e, std::size_t term_budget = 0, const Deadline& dl = {}) const;

  /// Simultaneous substitution var i -> images[i]; images must have one
  /// entry per variable. term_budget (0 = unlimited) caps the term count of
  /// intermediate results, raising BudgetExceededError beyond it.
  Polynomial substitute(const std::vector<Polynomial>& images,
                        std::size_t term_budget = 0, const Deadline& dl = {}) const;

  /// Coefficient of a monomial (zero Scalar when absent).
  Scalar coeff(const Monomial& m) const;
  /// Adds c * m to the polynomial.
  void add_term(const Monomial& m, const Scalar& c);

  /// Total degree (0 for constants and for zero).
  Exp degree() const;
  std::size_t term_count() const { return terms_.size(); }
  /// True when variable idx occurs in some term.
  bool mentions(std::size_t idx) const;

  /// Evaluate at a full vector of Scalar values.
  Scalar eval(const std::vector<Scalar>& point) const;

  std::string to_string(const std::vector<std::string>& names) const;

  const std::map<Monomial, Scalar, MonoLess>& terms() const { return terms_; }

private:
  std::size_t nvars_;
  std::map<Monomial, Scalar, MonoLess> terms_;  // invariant: no zero coeffs
};

/// Substitution by explicit per-variable bindings; a mentioned variable
/// without a binding raises MissingBindingError.
Polynomial poly_eval_subst(const Polynomial& p,
                           const std::map<std::size_t, Polynomial>& bindings);

}  // namespace loopinvar
