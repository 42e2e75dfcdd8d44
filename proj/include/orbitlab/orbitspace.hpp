#pragma once

// Symbolic orbit-space verdicts (discs, spheres, joins, holed spheres,
// products), the explicit point maps realizing them, the gluing relation
// over a stratification, and the complexity-one classifiers.

#include "orbitlab/defaults.hpp"
#include "orbitlab/descriptor.hpp"
#include "orbitlab/lattice.hpp"
#include "orbitlab/moment.hpp"
#include "orbitlab/polytope.hpp"
#include "orbitlab/projective.hpp"
#include "orbitlab/types.hpp"

#include <Eigen/Dense>

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace orbitlab {

// Flagged boundary cells fail the disjointness a hole count needs.
struct OverlapError : std::domain_error {
  using std::domain_error::domain_error;
};

struct OrbitSpaceModel {
  enum class Variant { Disc, Sphere, Join, KHoledSphere, Product };

  Variant variant = Variant::Sphere;
  // Disc/Sphere/KHoledSphere: the space's dimension. Join: dimension of the
  // sphere factor. Product: dimension of the polytope factor.
  int dim = 0;
  int holes = 0;                // KHoledSphere only
  QuotientDescriptor quotient;  // Join / Product second factor
  std::string provenance;      // construction that produced the verdict

  static OrbitSpaceModel disc(int d, std::string why);
  static OrbitSpaceModel sphere(int d, std::string why);
  static OrbitSpaceModel join(int sphere_dim, QuotientDescriptor q, std::string why);
  static OrbitSpaceModel k_holed_sphere(int d, int k, std::string why);
  static OrbitSpaceModel product(int polytope_dim, QuotientDescriptor q, std::string why);

  // Exhaustive rewriting by Join(m, Point) = Disc(m+1), Join(m, P^1) =
  // Sphere(m+3), KHoledSphere(d, 0) = Sphere(d); confluent, idempotent.
  OrbitSpaceModel normalized() const;
  // Equality of normalized forms; provenance ignored.
  bool equivalent_to(const OrbitSpaceModel& o) const;
  std::string to_string() const;
};

// Join(floor(n/2)-1, P^{ceil(n/2)-2}), normalized; the orbit space of the
// oriented 2-plane Grassmannian of R^n. n >= 4.
OrbitSpaceModel grassmannian_orbit_space(int n);

// The same shape read off a labelled stratification: every boundary cell
// must carry a point quotient and the interior cells must agree on one
// descriptor; the verdict joins the boundary sphere of the parent with it.
OrbitSpaceModel assemble_orbit_space(const Stratification& strat);

// [(u, y, t)] -> [(t u, y)]: the join as a quotient of (disc x Y). u unit.
std::pair<Eigen::VectorXd, ProjectivePoint> join_point_map(const Eigen::VectorXd& u,
                                                           const ProjectivePoint& y,
                                                           double t);

struct JoinPoint {
  Eigen::VectorXd u;
  ProjectivePoint y;
  double t = 0.0;
};

// Inverse representative on v != 0: (v, y) -> (v/|v|, y, |v|).
JoinPoint join_point_unmap(const Eigen::VectorXd& v, const ProjectivePoint& y);

// [(u, y)] -> (u, sqrt(1-|u|^2) y), a unit vector of S^{k+m}: collapses
// the fiber over each boundary u, injective over interior classes.
// Requires |u| <= 1 and |y| = 1.
Eigen::VectorXd holed_sphere_map(const Eigen::VectorXd& u, const Eigen::VectorXd& y);

// A point of the glued product presentation P x Y.
struct GluedPoint {
  Eigen::VectorXd u;
  ProjectivePoint y;
};

// Gluing relation: equal moment coordinates, and over the located cell
// either a point quotient or equal y. Throws std::domain_error when a u
// lies outside the parent polytope.
bool orbit_space_equivalent(const GluedPoint& p, const GluedPoint& q,
                            const Stratification& strat,
                            double tol = defaults::orbit_tol);

// Weight classifier for a complexity-one torus action on projective space
// (columns u_0..u_d in Z^{d-1}): a sphere when the affine relation of the
// weights has full support, a disc otherwise (the join acquires a cone
// factor from the unsupported weights).
OrbitSpaceModel classify_projective_cplx1(const IMatrix& weights);

// Hole counting for a complexity-one orbit space over P. `flagged` lists
// the boundary cells whose quotient stays the curve: with a rational curve
// the verdict is a sphere with one hole per connected flagged group; a
// non-rational curve admits no contraction and forces the product; a point
// quotient short-circuits to the disc. Flagged cells must sit in the
// boundary with pairwise disjoint relative interiors.
OrbitSpaceModel classify_cplx1_general(const RationalPolytope& P,
                                       const std::vector<RationalPolytope>& flagged,
                                       const QuotientDescriptor& generic);

// Flags the facets with positive degree (each facet of P needs an entry,
// none negative) and delegates; flagged facets must be pairwise
// non-adjacent, touching ones raise OverlapError.
OrbitSpaceModel holes_from_degree_function(const RationalPolytope& P,
                                           const std::map<int, Rational>& facet_degrees);

}  // namespace orbitlab
