#include "loopinvar/linalg.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "loopinvar/errors.hpp"

namespace loopinvar {

SMat SMat::identity(std::size_t n) {
  SMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Scalar(1);
  return m;
}

void SMat::add_row(SVec r) {
  if (data_.empty() && cols_ == 0) cols_ = r.size();
  if (r.size() != cols_) throw Error("add_row: width mismatch");
  data_.push_back(std::move(r));
}

SVec SMat::apply(const SVec& v) const {
  if (v.size() != cols_) throw Error("apply: size mismatch");
  SVec out(rows());
  for (std::size_t i = 0; i < rows(); ++i) out[i] = dot(data_[i], v);
  return out;
}

SMat SMat::operator*(const SMat& o) const {
  if (cols_ != o.rows()) throw Error("matrix product: size mismatch");
  SMat r(rows(), o.cols());
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      if (data_[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < o.cols(); ++j)
        r.at(i, j) += data_[i][k] * o.at(k, j);
    }
  return r;
}

SMat SMat::operator+(const SMat& o) const {
  if (rows() != o.rows() || cols_ != o.cols_) throw Error("matrix sum: size mismatch");
  SMat r = *this;
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) += o.at(i, j);
  return r;
}

SMat SMat::operator-(const SMat& o) const { return *this + o.scaled(Scalar(-1)); }

SMat SMat::scaled(const Scalar& c) const {
  SMat r = *this;
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) *= c;
  return r;
}

SMat SMat::transpose() const {
  SMat r(cols_, rows());
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = data_[i][j];
  return r;
}

Scalar dot(const SVec& a, const SVec& b) {
  if (a.size() != b.size()) throw Error("dot: size mismatch");
  Scalar out;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) out += a[i] * b[i];
  return out;
}

std::vector<std::size_t> rref_in_place(SMat& a, const Deadline& dl) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    dl.poll();
    std::size_t p = a.rows();
    for (std::size_t i = r; i < a.rows(); ++i) {
      if (!a.at(i, c).is_zero()) {
        p = i;
        break;
      }
    }
    if (p == a.rows()) continue;
    if (p != r) std::swap(a.row(p), a.row(r));
    Scalar inv = a.at(r, c);
    for (std::size_t j = c; j < a.cols(); ++j) a.at(r, j) /= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a.at(i, c).is_zero()) continue;
      Scalar f = a.at(i, c);
      for (std::size_t j = c; j < a.cols(); ++j) a.at(i, j) -= f * a.at(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rank_of(const SMat& a, const Deadline& dl) {
  SMat m = a;
  return rref_in_place(m, dl).size();
}

SVec normalize_primitive(SVec v) {
  std::size_t first = v.size();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_zero()) {
      first = i;
      break;
    }
  }
  if (first == v.size()) return v;

  // Clear denominators with their least common multiple.
  ParamPoly d(1);
  for (const auto& s : v) {
    if (s.is_zero()) continue;
    d = d * s.den().divide_exact(ParamPoly::gcd(d, s.den()));
  }
  if (!(d == ParamPoly(1))) {
    Scalar ds{d};
    for (auto& s : v) s *= ds;
  }
  // Divide out the common factor of the numerators.
  ParamPoly g;
  for (const auto& s : v) g = ParamPoly::gcd(g, s.num());
  bool flip = v[first].num().leading_coeff() < 0;
  if (flip) g = -g;
  if (!(g == ParamPoly(1))) {
    for (auto& s : v) {
      if (!s.is_zero()) s = Scalar(s.num().divide_exact(g));
    }
  }
  return v;
}

namespace {

bool matrix_has_params(const SMat& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a.at(i, j).has_params()) return true;
  return false;
}

/// A polynomial row equal to the Scalar row times the lcm of its denominators.
std::vector<ParamPoly> cleared_row(const SVec& row) {
  ParamPoly l(1);
  for (const auto& s : row) {
    if (s.is_zero()) continue;
    l = l * s.den().divide_exact(ParamPoly::gcd(l, s.den()));
  }
  std::vector<ParamPoly> out(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i].is_zero()) continue;
    out[i] = row[i].num() * l.divide_exact(row[i].den());
  }
  return out;
}

/// Divide a polynomial row by a common divisor of its entries and give the
/// leading nonzero entry a positive leading coefficient.
void primitivize_row(std::vector<ParamPoly>& row) {
  std::vector<const ParamPoly*> nz;
  const ParamPoly* first = nullptr;
  for (const auto& p : row) {
    if (p.is_zero()) continue;
    if (!first) first = &p;
    nz.push_back(&p);
  }
  if (!first) return;
  ParamPoly g = probable_common_divisor(nz);
  if (first->leading_coeff() < 0) g = -g;
  if (g.is_constant()) {
    Integer c = g.constant_value();
    if (c == 1) return;
    for (auto& p : row) {
      if (!p.is_zero()) p = p.divide_int(c);
    }
    return;
  }
  for (auto& p : row) {
    if (!p.is_zero()) p = p.divide_exact(g);
  }
}

/// Repeatedly divide the whole row by a known candidate factor while it
/// divides every nonzero entry. Constants are left to integer-content
/// handling in primitivize_row.
void strip_known_factor(std::vector<ParamPoly>& row, const ParamPoly& d) {
  if (d.is_constant()) return;
  while (true) {
    std::vector<ParamPoly> q(row.size());
    bool any = false;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j].is_zero()) continue;
      any = true;
      auto r = row[j].try_divide(d);
      if (!r) return;
      q[j] = std::move(*r);
    }
    if (!any) return;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!row[j].is_zero()) row[j] = std::move(q[j]);
    }
  }
}

/// Kernel of a matrix with parametric entries, computed fraction-free: rows
/// are scaled to polynomials, eliminated Gauss-Jordan style without division
/// (the kernel is invariant under row scaling), and kept primitive so entry
/// growth stays bounded. Pivots follow the Markowitz rule (fewest fill-in
/// first) to preserve sparsity. Fractions appear only in the final vectors.
std::vector<SVec> kernel_basis_poly(const SMat& a, const Deadline& dl) {
  const std::size_t cols = a.cols();
  std::vector<std::vector<ParamPoly>> m;
  m.reserve(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto row = cleared_row(a.row(i));
    primitivize_row(row);
    bool nonzero = false;
    for (const auto& p : row) nonzero = nonzero || !p.is_zero();
    if (nonzero) m.push_back(std::move(row));
  }
  const std::size_t rows = m.size();
  std::vector<bool> row_done(rows, false);
  std::vector<bool> col_done(cols, false);
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)
  while (true) {
    dl.poll();
    std::vector<std::size_t> row_cnt(rows, 0), col_cnt(cols, 0);
    for (std::size_t i = 0; i < rows; ++i) {
      if (row_done[i]) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        if (col_done[j] || m[i][j].is_zero()) continue;
        ++row_cnt[i];
        ++col_cnt[j];
      }
    }
    std::size_t bi = rows, bj = cols;
    std::size_t best_cost = 0, best_size = 0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (row_done[i]) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        if (col_done[j] || m[i][j].is_zero()) continue;
        std::size_t cost = (row_cnt[i] - 1) * (col_cnt[j] - 1);
        std::size_t size = m[i][j].size();
        if (bi == rows || cost < best_cost ||
            (cost == best_cost && size < best_size)) {
          bi = i;
          bj = j;
          best_cost = cost;
          best_size = size;
        }
      }
    }
    if (bi == rows) break;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == bi || m[i][bj].is_zero()) continue;
      dl.poll();
      ParamPoly f = std::move(m[i][bj]);
      m[i][bj] = ParamPoly();
      for (std::size_t j = 0; j < cols; ++j) {
        if (j == bj) continue;
        if (!m[i][j].is_zero()) m[i][j] = m[bi][bj] * m[i][j];
        if (!m[bi][j].is_zero()) m[i][j] -= f * m[bi][j];
      }
      // The structural common factors of the update are the pivot and the
      // eliminated coefficient; stripping them directly avoids gcd work.
      strip_known_factor(m[i], m[bi][bj]);
      strip_known_factor(m[i], f);
      primitivize_row(m[i]);
    }
    row_done[bi] = true;
    col_done[bj] = true;
    pivots.emplace_back(bi, bj);
  }
  std::vector<SVec> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (col_done[f]) continue;
    SVec v(cols);
    v[f] = Scalar(1);
    for (const auto& [pr, pc] : pivots) {
      if (m[pr][f].is_zero()) continue;
      v[pc] = -(Scalar(m[pr][f]) / Scalar(m[pr][pc]));
    }
    basis.push_back(normalize_primitive(std::move(v)));
  }
  return basis;
}

}  // namespace

std::vector<SVec> kernel_basis(const SMat& a, const Deadline& dl) {
  if (matrix_has_params(a)) return kernel_basis_poly(a, dl);
  SMat m = a;
  std::vector<std::size_t> pivots = rref_in_place(m, dl);
  std::vector<bool> is_pivot(a.cols(), false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  std::vector<SVec> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    SVec v(a.cols());
    v[f] = Scalar(1);
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -m.at(k, f);
    basis.push_back(normalize_primitive(std::move(v)));
  }
  return basis;
}

namespace {

/// Plain rational Gaussian elimination that remembers which original rows
/// became pivot rows.
std::vector<std::size_t> rational_pivot_rows(
    std::vector<std::vector<Rational>> m, const Deadline& dl) {
  std::size_t rows = m.size();
  std::size_t cols = rows == 0 ? 0 : m[0].size();
  std::vector<std::size_t> origin(rows);
  for (std::size_t i = 0; i < rows; ++i) origin[i] = i;
  std::vector<std::size_t> picked;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    dl.poll();
    std::size_t p = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (m[i][c] != 0) {
        p = i;
        break;
      }
    }
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    std::swap(origin[p], origin[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m[i][c] == 0) continue;
      Rational f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    picked.push_back(origin[r]);
    ++r;
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace

std::vector<SVec> kernel_basis_tall(const SMat& a, const Deadline& dl) {
  std::set<std::string> params;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a.at(i, j).collect_params(params);
  if (params.empty() || a.rows() <= a.cols() + 4) return kernel_basis(a, dl);

  // Sample the parameters; retry on the rare sample that hits a pole.
  std::vector<std::vector<Rational>> spec;
  for (int seed = 0; seed < 16; ++seed) {
    std::map<std::string, Rational> vals;
    long k = 0;
    for (const auto& name : params) {
      vals[name] = Rational(5 + 6 * k + seed, 2 + (seed % 5));
      ++k;
    }
    spec.assign(a.rows(), std::vector<Rational>(a.cols(), Rational(0)));
    bool ok = true;
    for (std::size_t i = 0; i < a.rows() && ok; ++i) {
      dl.poll();
      for (std::size_t j = 0; j < a.cols(); ++j) {
        try {
          spec[i][j] = a.at(i, j).specialize(vals);
        } catch (const Error&) {
          ok = false;
          break;
        }
      }
    }
    if (ok) break;
    spec.clear();
  }
  if (spec.empty()) return kernel_basis(a, dl);

  std::vector<std::size_t> chosen = rational_pivot_rows(std::move(spec), dl);
  std::set<std::size_t> in_subset(chosen.begin(), chosen.end());
  while (true) {
    dl.poll();
    SMat sub(0, a.cols());
    for (std::size_t i : in_subset) sub.add_row(a.row(i));
    std::vector<SVec> basis = kernel_basis(sub, dl);
    std::vector<std::size_t> violators;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (in_subset.count(i)) continue;
      dl.poll();
      for (const SVec& b : basis) {
        if (!dot(a.row(i), b).is_zero()) {
          violators.push_back(i);
          break;
        }
      }
    }
    if (violators.empty()) return basis;
    in_subset.insert(violators.begin(), violators.end());
  }
}

std::vector<SVec> canonical_row_space(std::vector<SVec> vecs, const Deadline& dl) {
  if (vecs.empty()) return {};
  SMat m(0, vecs.front().size());
  for (auto& v : vecs) m.add_row(std::move(v));
  std::vector<std::size_t> pivots = rref_in_place(m, dl);
  std::vector<SVec> out;
  out.reserve(pivots.size());
  for (std::size_t i = 0; i < pivots.size(); ++i)
    out.push_back(normalize_primitive(m.row(i)));
  return out;
}

bool in_span(const std::vector<SVec>& basis, const SVec& v, const Deadline& dl) {
  bool zero = true;
  for (const auto& s : v) zero = zero && s.is_zero();
  if (zero) return true;
  if (basis.empty()) return false;
  SMat m(0, v.size());
  for (const auto& b : basis) m.add_row(b);
  std::size_t r0 = rank_of(m, dl);
  m.add_row(v);
  return rank_of(m, dl) == r0;
}

std::optional<SVec> solve_linear(const SMat& a, const SVec& b, const Deadline& dl) {
  if (b.size() != a.rows()) throw Error("solve_linear: size mismatch");
  SMat aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, a.cols()) = b[i];
  }
  std::vector<std::size_t> pivots = rref_in_place(aug, dl);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  SVec x(a.cols());
  for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = aug.at(k, a.cols());
  return x;
}

SVec solve_square(const SMat& a, const SVec& b, const Deadline& dl) {
  if (a.rows() != a.cols()) throw Error("solve_square: not square");
  if (rank_of(a, dl) != a.rows()) throw Error("solve_square: singular matrix");
  auto x = solve_linear(a, b, dl);
  if (!x) throw Error("solve_square: inconsistent system");
  return *x;
}

std::vector<std::size_t> independent_rows(const SMat& a, const Deadline& dl) {
  std::vector<std::size_t> picked;
  SMat acc(0, a.cols());
  std::size_t rank = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    dl.poll();
    acc.add_row(a.row(i));
    std::size_t r = rank_of(acc, dl);
    if (r > rank) {
      rank = r;
      picked.push_back(i);
    } else {
      // Drop the dependent row again to keep the scan cheap.
      SMat trimmed(0, a.cols());
      for (std::size_t k : picked) trimmed.add_row(a.row(k));
      acc = std::move(trimmed);
    }
  }
  return picked;
}

SUniPoly char_poly(const SMat& a, const Deadline& dl) {
  if (a.rows() != a.cols()) throw Error("char_poly: not square");
  std::size_t n = a.rows();
  if (n == 0) return SUniPoly({Scalar(1)});
  SMat h = a;

  // Similarity reduction to upper Hessenberg form.
  for (std::size_t c = 0; c + 2 < n; ++c) {
    dl.poll();
    std::size_t p = n;
    for (std::size_t i = c + 1; i < n; ++i) {
      if (!h.at(i, c).is_zero()) {
        p = i;
        break;
      }
    }
    if (p == n) continue;
    if (p != c + 1) {
      std::swap(h.row(p), h.row(c + 1));
      for (std::size_t i = 0; i < n; ++i) std::swap(h.at(i, p), h.at(i, c + 1));
    }
    for (std::size_t i = c + 2; i < n; ++i) {
      if (h.at(i, c).is_zero()) continue;
      Scalar f = h.at(i, c) / h.at(c + 1, c);
      for (std::size_t j = 0; j < n; ++j) h.at(i, j) -= f * h.at(c + 1, j);
      for (std::size_t k = 0; k < n; ++k) h.at(k, c + 1) += f * h.at(k, i);
    }
  }

  // Characteristic polynomials of the leading principal blocks.
  std::vector<SUniPoly> p(n + 1);
  p[0] = SUniPoly({Scalar(1)});
  for (std::size_t i = 1; i <= n; ++i) {
    dl.poll();
    SUniPoly t = p[i - 1].mul_linear(h.at(i - 1, i - 1));
    Scalar prod(1);
    for (std::size_t k = i - 1; k >= 1; --k) {
      prod *= h.at(k, k - 1);
      if (prod.is_zero()) break;
      t = t - p[k - 1].scale(h.at(k - 1, i - 1) * prod);
    }
    p[i] = std::move(t);
  }
  return p[n];
}

}  // namespace loopinvar
