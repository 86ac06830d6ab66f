#include "loopinvar/oracle.hpp"

#include <cmath>
#include <random>
#include <utility>

#include "loopinvar/errors.hpp"

namespace loopinvar {

namespace {

/// Substitutes a subset of the parameters by rational values, keeping the
/// others symbolic.
Scalar specialize_some_poly(const ParamPoly& p,
                            const std::map<std::string, Rational>& vals) {
  Scalar out;
  for (const auto& [mono, coeff] : p.terms()) {
    Scalar term{Rational(coeff)};
    for (const auto& [name, exp] : mono) {
      auto it = vals.find(name);
      if (it != vals.end()) {
        term = term * Scalar(pow_rational(it->second, exp));
      } else {
        term = term * Scalar::param(name).pow(exp);
      }
    }
    out += term;
  }
  return out;
}

Scalar specialize_some(const Scalar& s,
                       const std::map<std::string, Rational>& vals) {
  return specialize_some_poly(s.num(), vals) / specialize_some_poly(s.den(), vals);
}

ExpPoly specialize_some(const ExpPoly& f,
                        const std::map<std::string, Rational>& vals) {
  ExpPoly out;
  for (const ExpTerm& t : f.terms()) {
    NPoly coeff;
    for (const Scalar& c : t.coeff) coeff.push_back(specialize_some(c, vals));
    out = out + ExpPoly::term(t.base, std::move(coeff));
  }
  return out;
}

Polynomial specialize_some(const Polynomial& p,
                           const std::map<std::string, Rational>& vals) {
  Polynomial out(p.nvars());
  for (const auto& [mono, coeff] : p.terms()) {
    out.add_term(mono, specialize_some(coeff, vals));
  }
  return out;
}

double poly_to_double(const ParamPoly& p,
                      const std::map<std::string, double>& valuation) {
  double out = 0.0;
  for (const auto& [mono, coeff] : p.terms()) {
    double term = coeff.get_d();
    for (const auto& [name, exp] : mono) {
      auto it = valuation.find(name);
      const double base = it != valuation.end() ? it->second : 0.0;
      term *= std::pow(base, static_cast<double>(exp));
    }
    out += term;
  }
  return out;
}

double scalar_to_double(const Scalar& s,
                        const std::map<std::string, double>& valuation) {
  return poly_to_double(s.num(), valuation) / poly_to_double(s.den(), valuation);
}

double rational_to_double(const Rational& r) { return mpq_class(r).get_d(); }

double eval_expr_double(const ExprPtr& e, const std::vector<double>& state,
                        const Program& prog,
                        const std::map<std::string, double>& valuation) {
  switch (e->kind) {
    case Expr::Kind::Num:
      return rational_to_double(e->num);
    case Expr::Kind::Sym: {
      auto it = prog.var_index.find(e->sym);
      if (it != prog.var_index.end()) return state[it->second];
      auto vt = valuation.find(e->sym);
      return vt != valuation.end() ? vt->second : 0.0;
    }
    case Expr::Kind::Add:
      return eval_expr_double(e->a, state, prog, valuation) +
             eval_expr_double(e->b, state, prog, valuation);
    case Expr::Kind::Sub:
      return eval_expr_double(e->a, state, prog, valuation) -
             eval_expr_double(e->b, state, prog, valuation);
    case Expr::Kind::Mul:
      return eval_expr_double(e->a, state, prog, valuation) *
             eval_expr_double(e->b, state, prog, valuation);
    case Expr::Kind::Neg:
      return -eval_expr_double(e->a, state, prog, valuation);
    case Expr::Kind::Pow:
      return std::pow(eval_expr_double(e->a, state, prog, valuation),
                      static_cast<double>(e->exp));
  }
  return 0.0;
}

void run_stmts_double(const std::vector<Stmt>& stmts, std::vector<double>& state,
                      const Program& prog,
                      const std::map<std::string, double>& valuation,
                      std::mt19937_64& gen) {
  for (const Stmt& st : stmts) {
    switch (st.kind) {
      case Stmt::Kind::Assign: {
        std::vector<double> vals;
        vals.reserve(st.rhs.size());
        for (const RhsExpr& r : st.rhs) {
          vals.push_back(eval_expr_double(r.main, state, prog, valuation));
        }
        for (std::size_t i = 0; i < st.targets.size(); ++i) {
          state[prog.var_index.at(st.targets[i])] = vals[i];
        }
        break;
      }
      case Stmt::Kind::Draw: {
        std::vector<double> args;
        for (const ExprPtr& a : st.args) {
          args.push_back(eval_expr_double(a, state, prog, valuation));
        }
        double drawn = 0.0;
        switch (st.dist) {
          case DistKind::Bernoulli: {
            std::bernoulli_distribution dist(args[0]);
            drawn = dist(gen) ? 1.0 : 0.0;
            break;
          }
          case DistKind::Normal: {
            std::normal_distribution<double> dist(args[0], std::sqrt(args[1]));
            drawn = dist(gen);
            break;
          }
          case DistKind::Uniform: {
            std::uniform_real_distribution<double> dist(args[0], args[1]);
            drawn = dist(gen);
            break;
          }
        }
        state[prog.var_index.at(st.targets[0])] = drawn;
        break;
      }
      case Stmt::Kind::Choice: {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        double u = unit(gen);
        std::size_t pick = st.branches.empty() ? 0 : st.branches.size() - 1;
        for (std::size_t i = 0; i < st.branches.size(); ++i) {
          const double p = rational_to_double(st.branches[i].first);
          if (u < p) {
            pick = i;
            break;
          }
          u -= p;
        }
        if (pick < st.branches.size()) {
          run_stmts_double(st.branches[pick].second, state, prog, valuation, gen);
        }
        break;
      }
      case Stmt::Kind::If:
        throw Error("if statements must be desugared before simulation");
    }
  }
}

double eval_poly_double(const Polynomial& p, const std::vector<double>& state,
                        const std::map<std::string, double>& valuation) {
  double out = 0.0;
  for (const auto& [mono, coeff] : p.terms()) {
    double term = scalar_to_double(coeff, valuation);
    for (std::size_t v = 0; v < mono.size(); ++v) {
      if (mono[v] > 0) term *= std::pow(state[v], static_cast<double>(mono[v]));
    }
    out += term;
  }
  return out;
}

}  // namespace

Scalar unroll_expectation(const MomentContext& ctx, const Polynomial& p,
                          unsigned long n, std::size_t term_budget,
                          const Deadline& dl) {
  Polynomial cur = p;
  for (unsigned long i = 0; i < n; ++i) {
    dl.poll();
    cur = ctx.pushforward(cur, dl);
    if (term_budget != 0 && cur.term_count() > term_budget) {
      throw BudgetExceededError("unrolled moment exceeded the term budget");
    }
  }
  return ctx.initial_moment(cur, dl);
}

CheckReport check_invariant(const MomentContext& ctx, const Invariant& inv,
                            unsigned long iterations, const Deadline& dl) {
  CheckReport report;
  report.weights = inv.weights;

  const std::size_t k = inv.weights.size();
  if (k == 0) {
    report.assignments.push_back({});
  } else {
    std::vector<Rational> ones, ramp, alt;
    for (std::size_t i = 0; i < k; ++i) {
      ones.push_back(1);
      ramp.push_back(Rational(static_cast<long>(i) + 1));
      Rational a(1, static_cast<long>(i) + 2);
      alt.push_back(i % 2 == 0 ? -a : a);
    }
    report.assignments.push_back(std::move(ones));
    report.assignments.push_back(std::move(ramp));
    report.assignments.push_back(std::move(alt));
  }

  for (std::size_t ai = 0; ai < report.assignments.size(); ++ai) {
    std::map<std::string, Rational> vals;
    for (std::size_t i = 0; i < k; ++i) {
      vals[inv.weights[i]] = report.assignments[ai][i];
    }
    const ExpPoly form =
        k == 0 ? inv.closed_form : specialize_some(inv.closed_form, vals);
    const Polynomial s_poly =
        k == 0 ? inv.s_poly : specialize_some(inv.s_poly, vals);

    Polynomial cur = s_poly;
    for (unsigned long n = 0; n < inv.valid_from; ++n) {
      cur = ctx.pushforward(cur, dl);
    }
    for (unsigned long n = inv.valid_from; n <= iterations; ++n) {
      dl.poll();
      CheckEntry entry;
      entry.assignment = ai;
      entry.n = n;
      entry.expected = form.eval(n);
      entry.actual = ctx.initial_moment(cur, dl);
      entry.equal = entry.expected == entry.actual;
      if (!entry.equal) report.pass = false;
      report.entries.push_back(std::move(entry));
      cur = ctx.pushforward(cur, dl);
    }
  }
  return report;
}

MonteCarloResult monte_carlo(const MomentContext& ctx, const Polynomial& p,
                             unsigned long n, std::size_t samples,
                             std::uint64_t seed,
                             const std::map<std::string, double>& valuation) {
  const Program& prog = ctx.program();
  std::mt19937_64 gen(seed);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> state(prog.vars.size());
    for (std::size_t v = 0; v < prog.vars.size(); ++v) {
      auto it = valuation.find(prog.vars[v]);
      state[v] = it != valuation.end() ? it->second : 0.0;
    }
    run_stmts_double(prog.inits, state, prog, valuation, gen);
    for (unsigned long i = 0; i < n; ++i) {
      run_stmts_double(prog.body, state, prog, valuation, gen);
    }
    const double value = eval_poly_double(p, state, valuation);
    sum += value;
    sum_sq += value * value;
  }
  MonteCarloResult result;
  if (samples == 0) return result;
  const double mean = sum / static_cast<double>(samples);
  result.estimate = mean;
  if (samples > 1) {
    const double var =
        (sum_sq - sum * mean) / static_cast<double>(samples - 1);
    result.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(samples));
  }
  return result;
}

}  // namespace loopinvar
