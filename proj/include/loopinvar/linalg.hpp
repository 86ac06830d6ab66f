#pragma once

// Exact linear algebra over the Scalar field: reduced row echelon form,
// canonical kernel bases, linear solving, and characteristic polynomials.
// Sizes are small (candidate spaces, closure systems), so the emphasis is
// on exactness and deterministic, canonical output rather than asymptotics.
// The one large shape — many more rows than columns — has a dedicated
// sampling-guided kernel routine.

#include <cstddef>
#include <optional>
#include <vector>

#include "loopinvar/deadline.hpp"
#include "loopinvar/scalar.hpp"
#include "loopinvar/unipoly.hpp"

namespace loopinvar {

using SVec = std::vector<Scalar>;

class SMat {
public:
  SMat() : cols_(0) {}
  SMat(std::size_t rows, std::size_t cols)
      : cols_(cols), data_(rows, SVec(cols)) {}
  static SMat identity(std::size_t n);

  std::size_t rows() const { return data_.size(); }
  std::size_t cols() const { return cols_; }
  Scalar& at(std::size_t i, std::size_t j) { return data_[i][j]; }
  const Scalar& at(std::size_t i, std::size_t j) const { return data_[i][j]; }
  const SVec& row(std::size_t i) const { return data_[i]; }
  SVec& row(std::size_t i) { return data_[i]; }
  /// Appends a row (must match cols(), or defines it for an empty matrix).
  void add_row(SVec r);

  /// Matrix-vector product A v.
  SVec apply(const SVec& v) const;
  SMat operator*(const SMat& o) const;
  SMat operator+(const SMat& o) const;
  SMat operator-(const SMat& o) const;
  SMat scaled(const Scalar& c) const;
  SMat transpose() const;
  bool operator==(const SMat& o) const {
    return cols_ == o.cols_ && data_ == o.data_;
  }

private:
  std::size_t cols_;
  std::vector<SVec> data_;
};

Scalar dot(const SVec& a, const SVec& b);

/// In-place reduced row echelon form; returns the pivot columns in order.
std::vector<std::size_t> rref_in_place(SMat& a, const Deadline& dl = {});

std::size_t rank_of(const SMat& a, const Deadline& dl = {});

/// Scale a vector to the canonical primitive representative of its line:
/// denominators cleared, coefficient content divided out, first nonzero
/// entry (graded-lex leading coefficient) positive.
SVec normalize_primitive(SVec v);

/// Canonical basis of the right kernel: one vector per RREF free column in
/// ascending column order, each primitively normalized. Depends only on
/// the row space, so any matrix with the same kernel yields the same list.
std::vector<SVec> kernel_basis(const SMat& a, const Deadline& dl = {});

/// Kernel of a matrix with far more rows than columns. Specializing the
/// parameters at a sample point guides the choice of a small row subset;
/// the subset is solved symbolically and every leftover row is checked
/// against the resulting basis, growing the subset until none object.
/// Output is identical to kernel_basis(a).
std::vector<SVec> kernel_basis_tall(const SMat& a, const Deadline& dl = {});

/// Canonical basis of the span of the given vectors: RREF rows, primitive,
/// pivots ascending. Empty input (or all-zero input) gives an empty list.
std::vector<SVec> canonical_row_space(std::vector<SVec> vecs,
                                      const Deadline& dl = {});

bool in_span(const std::vector<SVec>& basis, const SVec& v,
             const Deadline& dl = {});

/// Any exact solution of A x = b (free coordinates zero); nullopt when the
/// system is inconsistent.
std::optional<SVec> solve_linear(const SMat& a, const SVec& b,
                                 const Deadline& dl = {});

/// Unique solution of a square nonsingular system; throws Error otherwise.
SVec solve_square(const SMat& a, const SVec& b, const Deadline& dl = {});

/// Indices of a maximal linearly independent set of rows, in discovery
/// order (ascending).
std::vector<std::size_t> independent_rows(const SMat& a, const Deadline& dl = {});

/// Monic characteristic polynomial det(x I - A) of a square matrix, exact
/// over the Scalar field (Hessenberg reduction + the leading-principal-
/// minor recurrence).
SUniPoly char_poly(const SMat& a, const Deadline& dl = {});

}  // namespace loopinvar
