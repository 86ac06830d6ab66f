#pragma once

// Surface language: lexer, parser, validation, desugaring, and the
// canonical pretty-printer. Programs are lists of simultaneous (tuple)
// assignments, distribution draws, probabilistic choices and two-way
// branches on a drawn flag, wrapped in one nonterminating loop. The
// desugared core retains only assignments, draws and weighted choices.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "loopinvar/polynomial.hpp"
#include "loopinvar/rational.hpp"

namespace loopinvar {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Polynomial expression tree. Pow keeps a literal nonnegative exponent.
struct Expr {
  enum class Kind { Num, Sym, Add, Sub, Mul, Neg, Pow };
  Kind kind = Kind::Num;
  Rational num;      // Num
  std::string sym;   // Sym
  ExprPtr a, b;      // Add/Sub/Mul children; Neg/Pow child in a
  unsigned exp = 0;  // Pow
};

ExprPtr make_num(const Rational& v);
ExprPtr make_sym(const std::string& s);
ExprPtr make_add(ExprPtr a, ExprPtr b);
ExprPtr make_sub(ExprPtr a, ExprPtr b);
ExprPtr make_mul(ExprPtr a, ExprPtr b);
ExprPtr make_neg(ExprPtr a);
ExprPtr make_pow(ExprPtr a, unsigned e);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);
/// Constant value of a closed expression; nullopt when a symbol occurs.
std::optional<Rational> expr_const_value(const ExprPtr& e);
std::string expr_to_string(const ExprPtr& e);

enum class DistKind { Bernoulli, Normal, Uniform };

/// One right-hand side, optionally an inline two-way choice
/// "e1 {p} e2" (e1 with probability p, e2 with 1 - p).
struct RhsExpr {
  ExprPtr main;
  std::optional<Rational> prob;
  ExprPtr alt;
  bool has_choice() const { return prob.has_value(); }
};

struct Stmt {
  enum class Kind { Assign, Draw, Choice, If };
  Kind kind = Kind::Assign;

  // Assign: targets[i] = rhs[i], simultaneously. Draw: targets[0].
  std::vector<std::string> targets;
  std::vector<RhsExpr> rhs;

  // Draw
  DistKind dist = DistKind::Bernoulli;
  std::vector<ExprPtr> args;

  // Choice: probability-weighted branches.
  std::vector<std::pair<Rational, std::vector<Stmt>>> branches;

  // If: two-way branch on "cond_var = cond_value".
  std::string cond_var;
  long cond_value = 0;
  std::vector<Stmt> then_body;
  std::vector<Stmt> else_body;
};

bool stmt_equal(const Stmt& a, const Stmt& b);

struct Program {
  std::vector<std::string> params;
  std::vector<Stmt> inits;
  std::vector<Stmt> body;
  /// Program variables in declaration order (first occurrence as an
  /// assignment or draw target, initialization section first).
  std::vector<std::string> vars;
  std::map<std::string, std::size_t> var_index;
  /// True when any draw, choice, inline choice or if occurs anywhere.
  bool probabilistic = false;
};

bool program_equal(const Program& a, const Program& b);

/// Parses and validates a source text (ParseError / ValidationError).
Program parse_program(const std::string& source);

/// Expands inline choices into weighted choices and turns each if over a
/// freshly drawn flag into the weighted choice it denotes; checks the
/// soundness side conditions (DesugarError) and is idempotent.
Program desugar(const Program& p);

/// Canonical rendering; parsing it back yields an equal Program.
std::string pretty_print(const Program& p);

/// Expression lowering over the program variables; parameters become
/// symbolic coefficients. Pre: the program validated (symbols resolve).
Polynomial lower_expr(const ExprPtr& e, const Program& p);

}  // namespace loopinvar
