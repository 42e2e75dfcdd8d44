#pragma once

// Affine dependences of integer weight configurations.

#include "orbitlab/types.hpp"

#include <stdexcept>
#include <vector>

namespace orbitlab {

struct SpanError : std::domain_error {
  using std::domain_error::domain_error;
};

struct KernelDimensionError : std::domain_error {
  using std::domain_error::domain_error;
};

// The unique primitive relation  sum_i alpha_i u_i = 0,  sum_i alpha_i = 0
// of a configuration u_0..u_d that affinely spans its ambient lattice and
// has a one-dimensional space of such relations.
struct AffineRelation {
  RVector alpha;  // integer entries, gcd 1, leading nonzero entry positive

  std::vector<int> support() const {
    std::vector<int> s;
    for (Eigen::Index i = 0; i < alpha.size(); ++i)
      if (sign(alpha[i]) != 0) s.push_back(static_cast<int>(i));
    return s;
  }
};

// weights: one column per point u_i.
// Throws SpanError when the columns do not affinely span Z^rows,
// KernelDimensionError when the relation space is not one-dimensional.
AffineRelation affine_relation(const IMatrix& weights);

}  // namespace orbitlab
