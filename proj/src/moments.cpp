#include "loopinvar/moments.hpp"

#include <set>

#include "loopinvar/errors.hpp"

namespace loopinvar {

namespace {

constexpr std::size_t kPushforwardBudget = 200000;

}  // namespace

MomentContext::MomentContext(Program desugared) : prog_(std::move(desugared)) {
  // Stable symbolic names for the values of uninitialized variables.
  std::set<std::string> taken(prog_.params.begin(), prog_.params.end());
  for (const auto& v : prog_.vars) taken.insert(v);
  for (std::size_t i = 0; i < prog_.vars.size(); ++i) {
    std::string atom = prog_.vars[i] + "0";
    while (taken.count(atom)) atom += "_";
    taken.insert(atom);
    init_atoms_[i] = atom;
  }
}

Polynomial MomentContext::dist_moment_poly(const Stmt& draw, Exp k,
                                           const Deadline& dl) const {
  {
    std::lock_guard<std::mutex> lock(cache_mu_);
    auto it = moment_cache_.find({&draw, k});
    if (it != moment_cache_.end()) return it->second;
  }
  dl.poll();
  std::size_t n = nvars();
  Polynomial out(n);
  if (k == 0) {
    out = Polynomial::constant(n, Scalar(1));
  } else {
    switch (draw.dist) {
      case DistKind::Bernoulli:
        // X^k = X for a 0/1 variable, so E[X^k] = p.
        out = lower_expr(draw.args[0], prog_);
        break;
      case DistKind::Uniform: {
        // E[X^k] = (sum_{i=0..k} lo^i hi^(k-i)) / (k + 1), the division-
        // free form of (hi^(k+1) - lo^(k+1)) / ((k+1) (hi - lo)).
        Polynomial lo = lower_expr(draw.args[0], prog_);
        Polynomial hi = lower_expr(draw.args[1], prog_);
        for (Exp i = 0; i <= k; ++i) {
          dl.poll();
          out += lo.pow(i, kPushforwardBudget, dl) *
                 hi.pow(k - i, kPushforwardBudget, dl);
        }
        out = out.scale(Scalar(Rational(1, static_cast<unsigned long>(k) + 1)));
        break;
      }
      case DistKind::Normal: {
        // E[X^k] = sum over even j of C(k,j) (j-1)!! v^(j/2) mu^(k-j);
        // the second argument is the variance.
        Polynomial mu = lower_expr(draw.args[0], prog_);
        Polynomial var = lower_expr(draw.args[1], prog_);
        for (Exp j = 0; j <= k; j += 2) {
          dl.poll();
          Scalar w{Rational(binomial(k, j) *
                            double_factorial(static_cast<long>(j) - 1))};
          out += (var.pow(j / 2, kPushforwardBudget, dl) *
                  mu.pow(k - j, kPushforwardBudget, dl))
                     .scale(w);
        }
        break;
      }
    }
  }
  std::lock_guard<std::mutex> lock(cache_mu_);
  return moment_cache_.emplace(std::make_pair(&draw, k), std::move(out))
      .first->second;
}

Polynomial MomentContext::pushforward_stmts(const std::vector<Stmt>& stmts,
                                            Polynomial p, const Deadline& dl) const {
  for (auto it = stmts.rbegin(); it != stmts.rend(); ++it) {
    const Stmt& s = *it;
    dl.poll();
    if (p.is_zero()) return p;
    switch (s.kind) {
      case Stmt::Kind::Assign: {
        std::vector<Polynomial> images;
        images.reserve(nvars());
        for (std::size_t i = 0; i < nvars(); ++i)
          images.push_back(Polynomial::variable(nvars(), i));
        for (std::size_t i = 0; i < s.targets.size(); ++i)
          images[prog_.var_index.at(s.targets[i])] = lower_expr(s.rhs[i].main, prog_);
        p = p.substitute(images, kPushforwardBudget, dl);
        break;
      }
      case Stmt::Kind::Draw: {
        std::size_t v = prog_.var_index.at(s.targets[0]);
        // Split p by the power of the drawn variable and replace each
        // power by the distribution moment.
        Polynomial out(nvars());
        std::map<Exp, Polynomial> slices;
        for (const auto& [m, c] : p.terms()) {
          Exp k = m[v];
          Monomial rest = m;
          rest[v] = 0;
          auto [slot, fresh] = slices.try_emplace(k, Polynomial(nvars()));
          slot->second.add_term(rest, c);
        }
        for (const auto& [k, q] : slices) {
          dl.poll();
          out += q * dist_moment_poly(s, k, dl);
        }
        p = std::move(out);
        break;
      }
      case Stmt::Kind::Choice: {
        Polynomial mix(nvars());
        for (const auto& [prob, branch] : s.branches) {
          if (prob == 0) continue;
          mix += pushforward_stmts(branch, p, dl).scale(Scalar(prob));
        }
        p = std::move(mix);
        break;
      }
      case Stmt::Kind::If:
        throw Error("pushforward requires a desugared program (if found)");
    }
  }
  return p;
}

Polynomial MomentContext::pushforward(const Polynomial& p, const Deadline& dl) const {
  if (p.nvars() != nvars()) throw Error("pushforward: arity mismatch");
  return pushforward_stmts(prog_.body, p, dl);
}

Polynomial MomentContext::recurrence_of(const Monomial& m, const Deadline& dl) const {
  return pushforward(Polynomial::monomial(nvars(), m, Scalar(1)), dl);
}

Scalar MomentContext::initial_moment(const Polynomial& p, const Deadline& dl) const {
  if (p.nvars() != nvars()) throw Error("initial_moment: arity mismatch");
  Polynomial before = pushforward_stmts(prog_.inits, p, dl);
  // What remains refers to the state before any initializer ran; each
  // variable is its symbolic atom there.
  std::vector<Scalar> atoms;
  atoms.reserve(nvars());
  for (std::size_t i = 0; i < nvars(); ++i)
    atoms.push_back(Scalar::param(init_atoms_.at(i)));
  return before.eval(atoms);
}

}  // namespace loopinvar
