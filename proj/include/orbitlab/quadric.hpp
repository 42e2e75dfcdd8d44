#pragma once

// The oriented real 2-plane Grassmannian as a complex projective quadric,
// with its torus action and moment polytope.
//
// An oriented plane span(v1, v2) in R^n embeds through w = v1 + i v2 and
// the paired coordinates
//   z_{2j}   = w_{2j} + i w_{2j+1},
//   z_{2j+1} = w_{2j} - i w_{2j+1}        (0-based pairs j = 0..k-1),
// with the last coordinate passed through unchanged when n is odd. The
// image satisfies sum_j z_{2j} z_{2j+1} (+ z_{n-1}^2 for odd n) = 0, the
// paired coordinates carry torus weights +-e_j, and the moment polytope is
// the cross-polytope conv(+-e_1, ..., +-e_k), k = floor(n/2).

#include "orbitlab/moment.hpp"
#include "orbitlab/polytope.hpp"
#include "orbitlab/random.hpp"
#include "orbitlab/types.hpp"

#include <vector>

namespace orbitlab {

struct OrientedPlane {
  Eigen::VectorXd v1, v2;  // orthonormal
};

class QuadricModel {
 public:
  explicit QuadricModel(int n);  // n >= 4

  int n() const { return n_; }
  int pairs() const { return n_ / 2; }  // torus rank k
  bool has_fixed_coordinate() const { return n_ % 2 == 1; }

  // Weight columns (e_1, -e_1, ..., e_k, -e_k[, 0]).
  LinearTorusAction action() const;

  RationalPolytope moment_polytope() const;  // cross-polytope in Q^k

  // The induced T^k action on the quadric is effective only when a zero
  // weight is present; for even n a global circle acts trivially.
  bool torus_acts_effectively() const { return n_ % 2 == 1; }

  Complex quadric_value(const CVector& z) const;
  double quadric_residual(const CVector& z) const;  // |Q(z)| / ||z||^2

  // A coordinate support occurs on the quadric iff it does not keep
  // exactly one monomial of Q alive (indices 0-based).
  bool is_realizable_support(const std::vector<int>& support) const;

 private:
  int n_;
};

OrientedPlane sample_oriented_plane(int n, RandomStream& rng);

double frame_orthonormality_error(const OrientedPlane& p);

CVector embed_plane(const OrientedPlane& p);

// Every coordinate support realized on the quadric, ascending by mask:
// the oracle input for stratifying the Grassmannian.
std::vector<std::vector<int>> realizable_supports(const QuadricModel& model);

}  // namespace orbitlab
