#pragma once

// Exact linear algebra over Q. Eigen dense types carry the data; the
// eliminations are written out by hand because pivot decisions must be
// exact sign tests, not magnitude comparisons.

#include "orbitlab/types.hpp"

#include <optional>
#include <vector>

namespace orbitlab {

struct Echelon {
  RMatrix mat;                  // reduced row echelon form
  std::vector<int> pivot_cols;  // ascending, one per pivot row
  int rank() const { return static_cast<int>(pivot_cols.size()); }
};

Echelon row_reduce(RMatrix a);

int rational_rank(const RMatrix& a);

// Columns span the null space of a (empty matrix for trivial kernel).
RMatrix kernel_basis(const RMatrix& a);

// Any solution of a x = b, or nullopt when inconsistent.
std::optional<RVector> solve_linear(const RMatrix& a, const RVector& b);

// Inverse of a square nonsingular matrix; throws std::domain_error otherwise.
RMatrix invert(const RMatrix& a);

Rational determinant(RMatrix a);

// Scale to coprime integer entries with positive leading sign.
// Zero vectors pass through unchanged.
RVector primitive(const RVector& v);

}  // namespace orbitlab
