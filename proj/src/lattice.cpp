#include "orbitlab/lattice.hpp"

#include "orbitlab/linalg.hpp"

namespace orbitlab {

AffineRelation affine_relation(const IMatrix& weights) {
  const int k = static_cast<int>(weights.rows());
  const int m = static_cast<int>(weights.cols());
  if (m < 2) throw SpanError("affine_relation: need at least two weights");

  RMatrix diffs(k, m - 1);
  for (int i = 1; i < m; ++i)
    for (int r = 0; r < k; ++r)
      diffs(r, i - 1) = Rational(weights(r, i) - weights(r, 0));
  if (rational_rank(diffs) != k)
    throw SpanError("affine_relation: weights do not affinely span the ambient lattice");

  // Homogenized system: weight rows plus the coefficient-sum row.
  RMatrix m_h(k + 1, m);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < m; ++c) m_h(r, c) = Rational(weights(r, c));
  for (int c = 0; c < m; ++c) m_h(k, c) = 1;

  RMatrix ker = kernel_basis(m_h);
  if (ker.cols() != 1)
    throw KernelDimensionError(
        "affine_relation: relation space has dimension " + std::to_string(ker.cols()));
  return AffineRelation{primitive(ker.col(0))};
}

}  // namespace orbitlab
