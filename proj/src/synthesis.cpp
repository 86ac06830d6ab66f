#include "loopinvar/synthesis.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "loopinvar/errors.hpp"
#include "loopinvar/unipoly.hpp"

namespace loopinvar {

namespace {

void enumerate_candidates(std::size_t nvars, const Partition& part, Exp d,
                          CandMode mode, std::size_t at, Exp remaining,
                          Monomial& cur, std::vector<Monomial>& out) {
  if (at == nvars) {
    if (mono_degree(cur) == 0) return;
    if (!effective_monomial(cur, part)) out.push_back(cur);
    return;
  }
  const bool defective = part.defective.count(at) != 0;
  const Exp top = (mode == CandMode::Pure && !defective) ? 0 : remaining;
  for (Exp e = 0; e <= top; ++e) {
    cur[at] = e;
    enumerate_candidates(nvars, part, d, mode, at + 1, remaining - e, cur, out);
  }
  cur[at] = 0;
}

std::size_t monomials_up_to(std::size_t nvars, Exp d) {
  return binomial(static_cast<unsigned long>(d) + nvars, nvars).get_ui();
}

/// Fresh weight names w1..wk avoiding parameters, variables, and atoms.
std::vector<std::string> fresh_weights(const MomentContext& ctx, std::size_t k) {
  std::set<std::string> taken;
  for (const auto& p : ctx.program().params) taken.insert(p);
  for (const auto& v : ctx.program().vars) taken.insert(v);
  for (const auto& [idx, atom] : ctx.init_atoms()) {
    (void)idx;
    taken.insert(atom);
  }
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= k; ++i) {
    std::string name = "w" + std::to_string(i);
    while (taken.count(name) != 0) name += "_";
    taken.insert(name);
    names.push_back(name);
  }
  return names;
}

}  // namespace

std::vector<Monomial> candidate_monomials(std::size_t nvars, const Partition& part,
                                          Exp d, CandMode mode) {
  if (part.defective.empty()) {
    throw NoDefectiveVariablesError(
        "the recurrence operator is solvable: no defective variables to combine");
  }
  std::vector<Monomial> out;
  Monomial cur(nvars, 0);
  enumerate_candidates(nvars, part, d, mode, 0, d, cur, out);
  std::sort(out.begin(), out.end(), MonoLess{});
  return out;
}

std::size_t candidate_count(std::size_t nvars, const Partition& part, Exp d,
                            CandMode mode) {
  if (part.defective.empty()) {
    throw NoDefectiveVariablesError(
        "the recurrence operator is solvable: no defective variables to combine");
  }
  if (mode == CandMode::Pure) {
    return monomials_up_to(part.defective.size(), d) - 1;
  }
  return monomials_up_to(nvars, d) - monomials_up_to(part.effective.size(), d);
}

ConstraintSystem constraint_matrices(const MomentContext& ctx, const Partition& part,
                                     Exp d, CandMode mode, const Deadline& dl) {
  ConstraintSystem cs;
  cs.candidate = candidate_monomials(ctx.nvars(), part, d, mode);
  const std::size_t w = cs.candidate.size();
  std::map<Monomial, std::size_t> cidx;
  for (std::size_t j = 0; j < w; ++j) cidx.emplace(cs.candidate[j], j);

  cs.a_cand = SMat(w, w);
  cs.effective_parts.assign(w, Polynomial(ctx.nvars()));
  std::map<Monomial, std::size_t> xidx;
  std::vector<SVec> extra_rows;

  for (std::size_t j = 0; j < w; ++j) {
    dl.poll();
    const Polynomial rec = ctx.recurrence_of(cs.candidate[j], dl);
    for (const auto& [mono, coeff] : rec.terms()) {
      auto cit = cidx.find(mono);
      if (cit != cidx.end()) {
        cs.a_cand.at(cit->second, j) = coeff;
      } else if (effective_monomial(mono, part)) {
        cs.effective_parts[j].add_term(mono, coeff);
      } else {
        auto [xit, fresh] = xidx.emplace(mono, extra_rows.size());
        if (fresh) {
          cs.extra.push_back(mono);
          extra_rows.emplace_back(w);
        }
        extra_rows[xit->second][j] = coeff;
      }
    }
  }

  cs.a_extra = SMat(extra_rows.size(), w);
  for (std::size_t i = 0; i < extra_rows.size(); ++i) {
    cs.a_extra.row(i) = std::move(extra_rows[i]);
  }
  return cs;
}

std::vector<SolutionSpace> solve_solution_space(const ConstraintSystem& sys,
                                                const Deadline& dl) {
  const std::size_t w = sys.candidate.size();
  if (w == 0) return {};

  const std::vector<SVec> kern = kernel_basis_tall(sys.a_extra, dl);
  if (kern.empty()) return {};
  const std::size_t k = kern.size();

  SMat vm(w, k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < w; ++i) vm.at(i, j) = kern[j][i];
  }
  const SMat av = sys.a_cand * vm;

  // The eigenproblem A v = kappa v restricted to the kernel: with
  // v = V w and R a row set making V_R invertible, every solution
  // satisfies C w = kappa w for C = V_R^{-1} (A V)_R. Eigenvalues of C
  // are candidate kappas only; each one is verified against the full
  // system afterwards.
  const std::vector<std::size_t> rows = independent_rows(vm, dl);
  if (rows.size() != k) throw Error("kernel basis is not independent");
  SMat vr(k, k);
  SMat avr(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      vr.at(i, j) = vm.at(rows[i], j);
      avr.at(i, j) = av.at(rows[i], j);
    }
  }
  SMat c(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    SVec col(k);
    for (std::size_t i = 0; i < k; ++i) col[i] = avr.at(i, j);
    const SVec sol = solve_square(vr, col, dl);
    for (std::size_t i = 0; i < k; ++i) c.at(i, j) = sol[i];
  }

  const SUniPoly cp = char_poly(c, dl);
  std::set<Rational> kappas;
  if (!cp.has_params()) {
    for (const auto& [root, mult] : rational_roots(cp.to_rational()).roots) {
      (void)mult;
      kappas.insert(root);
    }
  } else {
    // Parametric spectrum: a kappa valid for every parameter value is a
    // rational root of each pole-free specialization, so the union over
    // several sample points is a complete candidate set. Spurious
    // entries are removed by the verification below.
    std::set<std::string> params;
    for (const Scalar& s : cp.coeffs()) s.collect_params(params);
    std::size_t successes = 0;
    for (unsigned seed = 0; seed < 10 && successes < 4; ++seed) {
      std::map<std::string, Rational> vals;
      std::size_t pi = 0;
      for (const auto& name : params) {
        vals[name] = Rational(7 + 3 * seed + 11 * pi, 1 + seed % 4);
        ++pi;
      }
      try {
        std::vector<Rational> coeffs;
        for (const Scalar& s : cp.coeffs()) coeffs.push_back(s.specialize(vals));
        const UniPoly spec{std::move(coeffs)};
        if (spec.is_zero()) continue;
        for (const auto& [root, mult] : rational_roots(spec).roots) {
          (void)mult;
          kappas.insert(root);
        }
        ++successes;
      } catch (const Error&) {
        continue;  // specialization hit a pole; try the next seed
      }
    }
    if (successes == 0) throw Error("no valid parameter specialization found");
  }

  std::vector<SolutionSpace> out;
  for (const Rational& kappa : kappas) {
    dl.poll();
    SMat m(w, k);
    const Scalar ks(kappa);
    for (std::size_t i = 0; i < w; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        m.at(i, j) = av.at(i, j) - ks * vm.at(i, j);
      }
    }
    const std::vector<SVec> wbasis = kernel_basis(m, dl);
    if (wbasis.empty()) continue;
    std::vector<SVec> vecs;
    for (const SVec& wv : wbasis) {
      SVec v(w);
      for (std::size_t i = 0; i < w; ++i) {
        Scalar acc;
        for (std::size_t j = 0; j < k; ++j) acc += vm.at(i, j) * wv[j];
        v[i] = acc;
      }
      vecs.push_back(std::move(v));
    }
    out.push_back({kappa, canonical_row_space(std::move(vecs), dl)});
  }
  return out;
}

SynthesisResult synthesize(const MomentContext& ctx, Exp d, CandMode mode,
                           const Deadline& dl) {
  const Partition part = partition_variables(build_graph(ctx));
  if (part.defective.empty()) {
    throw NoDefectiveVariablesError(
        "the recurrence operator is solvable: no defective variables to combine");
  }

  const ConstraintSystem cs = constraint_matrices(ctx, part, d, mode, dl);
  SynthesisResult res;
  res.degree = d;
  res.partition = part;
  res.candidate = cs.candidate;
  res.equation_count = cs.a_extra.rows();
  res.spaces = solve_solution_space(cs, dl);

  for (const SolutionSpace& space : res.spaces) {
    for (const SVec& v : space.basis) {
      for (std::size_t j = 0; j < cs.candidate.size(); ++j) {
        if (mono_degree(cs.candidate[j]) == d && !v[j].is_zero()) {
          res.has_exact_degree = true;
        }
      }
    }
  }

  const bool expectation = ctx.program().probabilistic;
  for (const SolutionSpace& space : res.spaces) {
    dl.poll();
    const std::size_t k = space.basis.size();
    Invariant inv;
    inv.degree = d;
    inv.kappa = space.kappa;
    inv.space_dim = k;
    inv.expectation = expectation;

    SVec coeffs(cs.candidate.size());
    if (k == 1) {
      coeffs = space.basis[0];
    } else {
      inv.weights = fresh_weights(ctx, k);
      for (std::size_t i = 0; i < k; ++i) {
        const Scalar wi = Scalar::param(inv.weights[i]);
        for (std::size_t j = 0; j < cs.candidate.size(); ++j) {
          coeffs[j] += wi * space.basis[i][j];
        }
      }
    }
    inv.coefficients = coeffs;

    Polynomial s_poly(ctx.nvars());
    Polynomial h_poly(ctx.nvars());
    for (std::size_t j = 0; j < cs.candidate.size(); ++j) {
      if (coeffs[j].is_zero()) continue;
      s_poly.add_term(cs.candidate[j], coeffs[j]);
      h_poly += cs.effective_parts[j].scale(coeffs[j]);
    }
    inv.s_poly = s_poly;
    inv.initial_value = ctx.initial_moment(s_poly, dl);

    const ClosedForm h = closed_form_of_polynomial(ctx, h_poly, part, 5000, dl);
    FirstOrderSolution sol;
    if (h.valid_from == 0) {
      sol = solve_first_order(space.kappa, h.form, inv.initial_value);
    } else {
      Polynomial cur = s_poly;
      for (unsigned t = 0; t < h.valid_from; ++t) cur = ctx.pushforward(cur, dl);
      sol = solve_first_order_from(space.kappa, h.form, h.valid_from,
                                   ctx.initial_moment(cur, dl));
    }
    inv.closed_form = sol.form;
    inv.valid_from = sol.valid_from;
    if (inv.closed_form.has_base0()) {
      inv.closed_form = inv.closed_form.strip_base0();
      inv.valid_from = std::max(inv.valid_from, 1u);
    }
    res.invariants.push_back(std::move(inv));
  }
  return res;
}

}  // namespace loopinvar
