#pragma once

// The residual quotient map q on the interior strata of the quadric, the
// per-cell quotient descriptors, and a constructive solver that decides
// whether two quadric points lie on the same algebraic-torus orbit.

#include "orbitlab/defaults.hpp"
#include "orbitlab/descriptor.hpp"
#include "orbitlab/moment.hpp"
#include "orbitlab/projective.hpp"
#include "orbitlab/quadric.hpp"
#include "orbitlab/random.hpp"
#include "orbitlab/types.hpp"

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>

namespace orbitlab {

// All defining monomials of q vanish: the point sits over the boundary of
// the moment polytope, where q has no value.
struct IndeterminacyError : std::domain_error {
  using std::domain_error::domain_error;
};

// q(z) = (z_2 z_3 : z_4 z_5 : ... [: z_{n-1}^2]) in 0-based coordinates:
// the product of every pair but the first (the quadric relation determines
// that one), with the squared fixed coordinate appended for odd n. Every
// monomial has torus weight zero. Defined exactly when mu(z) is interior.
ProjectivePoint q_map(const CVector& z, const QuadricModel& model);

// One solver run, kept for audit logs.
struct SolverRecord {
  int pair_id = -1;
  double mu_gap = -1.0;      // |mu(z) - mu(z')|_inf
  double q_gap = -1.0;       // projective distance of q values; -1 if unused
  bool boundary = false;     // boundary branch taken (no q gate)
  std::optional<TorusElement> s;  // set on acceptance only
  double unit_defect = -1.0;      // max_j ||s_j| - 1|
  double residual = -1.0;         // projective distance of s.z from z'
};

// Searches for a torus element with s.z = z' projectively. Inputs must be
// unit vectors on the quadric (residual below eps_quad); anything else is a
// std::domain_error. Gates: moment values within tol, and for interior
// points agreeing q values. The returned certificate has every |s_j| within
// tol of 1 and moves z within tol of z'.
std::optional<TorusElement> t_orbit_equivalence(const CVector& z, const CVector& zp,
                                                const QuadricModel& model,
                                                double tol = defaults::orbit_tol,
                                                SolverRecord* record = nullptr);

// Point over single-orbit boundary cells, P^{ceil(n/2)-2} over interior ones.
QuotientDescriptor quotient_descriptor(const StratCell& cell, const QuadricModel& model);

// stratify() driven by the quadric's support oracle and descriptors.
Stratification grassmannian_stratification(const QuadricModel& model);

// Positive torus element r with mu(r.z) = u, when the sign pattern of u is
// attainable from the support of z; found by monotone bisection in the
// normalization constant. Zero-coordinate obstructions return nullopt.
std::optional<TorusElement> rescale_to_fiber(const CVector& z, const Eigen::VectorXd& u,
                                             const QuadricModel& model);

// Unit-norm quadric point with moment value u strictly inside beta_k:
// a sampled plane pushed onto the fiber by rescale_to_fiber.
CVector sample_fiber_point(const Eigen::VectorXd& u, const QuadricModel& model,
                           RandomStream& rng);

// Unit-norm quadric point over an exact boundary value (sum |u_j| = 1):
// one coordinate per pair is zeroed symbolically, the survivor carries
// modulus sqrt(|u_j|) and a random phase.
CVector sample_boundary_fiber_point(const RVector& u, const QuadricModel& model,
                                    RandomStream& rng);

}  // namespace orbitlab
