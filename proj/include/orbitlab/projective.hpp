#pragma once

// Points of complex projective space and the chordal (Fubini-Study)
// distance used to compare them.

#include "orbitlab/types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace orbitlab {

class ProjectivePoint {
 public:
  explicit ProjectivePoint(const CVector& z) : z_(z) {
    const double n = z_.norm();
    if (!(n > 0.0)) throw std::invalid_argument("projective point needs z != 0");
    z_ /= n;
  }

  const CVector& rep() const { return z_; }

  // Representative with the largest-modulus coordinate real and positive:
  // invariant under rescaling by any nonzero complex number.
  CVector canonical() const {
    Eigen::Index imax = 0;
    z_.cwiseAbs().maxCoeff(&imax);
    Complex phase = z_(imax) / std::abs(z_(imax));
    return z_ / phase;
  }

 private:
  CVector z_;
};

// Chordal distance sqrt(2 (1 - |<a, b>|)) for unit representatives: 0 iff
// equal in P^{m-1}, sqrt(2) for orthogonal lines. Evaluated as the norm of
// the phase-aligned difference, which stays accurate near zero where the
// inner-product form loses half the digits to cancellation.
inline double proj_distance(const ProjectivePoint& a, const ProjectivePoint& b) {
  const Complex ip = a.rep().dot(b.rep());
  const double m = std::abs(ip);
  if (!(m > 0.0)) return std::sqrt(2.0);
  return ((ip / m) * a.rep() - b.rep()).norm();
}

inline double proj_distance(const CVector& a, const CVector& b) {
  return proj_distance(ProjectivePoint(a), ProjectivePoint(b));
}

}  // namespace orbitlab
