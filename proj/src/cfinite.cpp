#include "loopinvar/cfinite.hpp"

#include <map>
#include <sstream>
#include <utility>

#include "loopinvar/errors.hpp"

namespace loopinvar {

namespace {

std::size_t defective_witness(const Monomial& m, const Partition& part) {
  for (std::size_t v = 0; v < m.size(); ++v) {
    if (m[v] > 0 && part.defective.count(v) != 0) return v;
  }
  return m.size();
}

}  // namespace

ClosureSystem moment_closure(const MomentContext& ctx,
                             const std::vector<Monomial>& seeds,
                             const Partition& part, std::size_t budget,
                             const Deadline& dl) {
  const std::size_t nvars = ctx.nvars();
  std::vector<Monomial> order;
  std::map<Monomial, std::size_t> index;
  const auto require_member = [&](const Monomial& m) -> std::size_t {
    auto it = index.find(m);
    if (it != index.end()) return it->second;
    if (!effective_monomial(m, part)) {
      std::ostringstream os;
      os << "closure of effective moments reached defective variable "
         << ctx.program().vars[defective_witness(m, part)] << " via "
         << mono_to_string(m, ctx.program().vars);
      throw DefectiveLeakError(os.str());
    }
    if (order.size() >= budget) {
      std::ostringstream os;
      os << "moment closure exceeded the budget of " << budget << " monomials";
      throw ClosureBudgetExceeded(os.str());
    }
    const std::size_t id = order.size();
    order.push_back(m);
    index.emplace(m, id);
    return id;
  };

  for (const Monomial& m : seeds) require_member(m);

  // FIFO closure: recurrences are computed in member order, and every
  // monomial they mention is itself made a member.
  std::vector<Polynomial> recurrences;
  for (std::size_t i = 0; i < order.size(); ++i) {
    dl.poll();
    const Polynomial rec = ctx.recurrence_of(order[i], dl);
    for (const auto& [mono, coeff] : rec.terms()) {
      (void)coeff;
      require_member(mono);
    }
    recurrences.push_back(rec);
  }

  // Final member order: discovery order, except that the constant monomial
  // (when present) is listed last.
  const Monomial unit(nvars, 0);
  std::vector<std::size_t> final_of_old(order.size());
  std::vector<Monomial> monomials;
  monomials.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] == unit) continue;
    final_of_old[i] = monomials.size();
    monomials.push_back(order[i]);
  }
  auto unit_it = index.find(unit);
  if (unit_it != index.end()) {
    final_of_old[unit_it->second] = monomials.size();
    monomials.push_back(unit);
  }

  ClosureSystem sys;
  sys.monomials = std::move(monomials);
  sys.matrix = SMat(sys.monomials.size(), sys.monomials.size());
  sys.init = SVec(sys.monomials.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t fi = final_of_old[i];
    for (const auto& [mono, coeff] : recurrences[i].terms()) {
      sys.matrix.at(fi, final_of_old[index.at(mono)]) = coeff;
    }
    sys.init[fi] = ctx.initial_moment(
        Polynomial::monomial(nvars, order[i], Scalar(1)), dl);
  }
  return sys;
}

std::vector<ClosedForm> closed_forms(const ClosureSystem& sys, const Deadline& dl) {
  const std::size_t dim = sys.dim();
  if (dim == 0) return {};

  const SUniPoly cp = char_poly(sys.matrix, dl);
  const SRootList rl = rational_roots(cp);
  if (rl.residual.degree() > 0) {
    std::ostringstream os;
    os << "closure spectrum is not rational: a factor of degree "
       << rl.residual.degree() << " has no rational root";
    throw UnsupportedSpectrumError(os.str());
  }

  unsigned m0 = 0;
  std::vector<std::pair<Rational, unsigned>> nonzero;
  for (const auto& [root, mult] : rl.roots) {
    if (root == 0) {
      m0 = mult;
    } else {
      nonzero.push_back({root, mult});
    }
  }
  std::size_t u = 0;
  for (const auto& [root, mult] : nonzero) {
    (void)root;
    u += mult;
  }

  // Exact trajectory (one vector per n). The transient from the zero
  // eigenvalue dies after m0 steps, and m0 + u = dim, so sampling the
  // fit at n = m0 .. m0 + u - 1 and verifying through n = dim + 1 stays
  // inside the computed range.
  std::vector<SVec> vals;
  vals.push_back(sys.init);
  for (std::size_t n = 0; n + 1 <= dim + 1; ++n) {
    dl.poll();
    vals.push_back(sys.matrix.apply(vals.back()));
  }

  // One confluent-Vandermonde fit serves every component: solve
  // [B | rhs_1 ... rhs_dim] with B invertible by construction.
  std::vector<SVec> fitted(dim);  // per component, u coefficients
  if (u > 0) {
    SMat aug(u, u + dim);
    for (std::size_t s = 0; s < u; ++s) {
      const unsigned long n = m0 + s;
      std::size_t col = 0;
      for (const auto& [root, mult] : nonzero) {
        const Rational base_pow = pow_rational(root, n);
        Rational npow = 1;
        for (unsigned t = 0; t < mult; ++t) {
          aug.at(s, col++) = Scalar(base_pow * npow);
          npow *= Rational(n);
        }
      }
      for (std::size_t j = 0; j < dim; ++j) {
        aug.at(s, u + j) = vals[n][j];
      }
    }
    const std::vector<std::size_t> pivots = rref_in_place(aug, dl);
    if (pivots.size() != u) throw Error("closed-form fit matrix is singular");
    for (std::size_t k = 0; k < u; ++k) {
      if (pivots[k] != k) throw Error("closed-form fit matrix is singular");
    }
    for (std::size_t j = 0; j < dim; ++j) {
      SVec c(u);
      for (std::size_t s = 0; s < u; ++s) c[s] = aug.at(s, u + j);
      fitted[j] = std::move(c);
    }
  }

  std::vector<ClosedForm> out;
  out.reserve(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    dl.poll();
    ExpPoly base_part;
    std::size_t col = 0;
    for (const auto& [root, mult] : nonzero) {
      NPoly coeff(fitted[j].begin() + col, fitted[j].begin() + col + mult);
      col += mult;
      base_part = base_part + ExpPoly::term(root, std::move(coeff));
    }

    // First try to absorb the whole transient into a delta at n = 0;
    // when the transient is longer than one step, claim the form from
    // n = m0 instead.
    const Scalar delta = vals[0][j] - base_part.eval(0);
    ExpPoly candidate = base_part + ExpPoly::term(Rational(0), NPoly{delta});
    bool exact_everywhere = true;
    for (std::size_t n = 0; n <= dim + 1; ++n) {
      if (candidate.eval(n) != vals[n][j]) {
        exact_everywhere = false;
        break;
      }
    }
    if (exact_everywhere) {
      out.push_back({std::move(candidate), 0});
      continue;
    }
    for (std::size_t n = m0; n <= dim + 1; ++n) {
      if (base_part.eval(n) != vals[n][j]) {
        throw Error("closed-form fit failed to reproduce the trajectory");
      }
    }
    out.push_back({std::move(base_part), m0});
  }
  return out;
}

ClosedForm closed_form_of_polynomial(const MomentContext& ctx, const Polynomial& p,
                                     const Partition& part, std::size_t budget,
                                     const Deadline& dl) {
  if (p.is_zero()) return {ExpPoly(), 0};
  std::vector<Monomial> seeds;
  for (const auto& [mono, coeff] : p.terms()) {
    (void)coeff;
    seeds.push_back(mono);
  }
  const ClosureSystem sys = moment_closure(ctx, seeds, part, budget, dl);
  const std::vector<ClosedForm> forms = closed_forms(sys, dl);
  std::map<Monomial, std::size_t> index;
  for (std::size_t i = 0; i < sys.monomials.size(); ++i) {
    index.emplace(sys.monomials[i], i);
  }
  ClosedForm combined;
  for (const auto& [mono, coeff] : p.terms()) {
    const ClosedForm& f = forms[index.at(mono)];
    combined.form = combined.form + f.form.scale(coeff);
    if (f.valid_from > combined.valid_from) combined.valid_from = f.valid_from;
  }
  return combined;
}

}  // namespace loopinvar
