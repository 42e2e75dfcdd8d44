#pragma once

// Moment maps of linear torus actions and the polytopes their orbits
// trace out. Floating point carries the sampled points; every polytope
// that comes out is exact (weights are integers).

#include "orbitlab/defaults.hpp"
#include "orbitlab/descriptor.hpp"
#include "orbitlab/polytope.hpp"
#include "orbitlab/types.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <vector>

namespace orbitlab {

// T^k acting linearly on C^m: column i of `weights` is the integer weight
// of the i-th coordinate, so t . z multiplies z_i by prod_j t_j^{w_ji}.
struct LinearTorusAction {
  IMatrix weights;
  int rank() const { return static_cast<int>(weights.rows()); }
  int coords() const { return static_cast<int>(weights.cols()); }
};

// Element of (S^1)^k as unit phases.
using TorusElement = CVector;

CVector torus_act(const LinearTorusAction& a, const TorusElement& t, const CVector& z);

// mu(z) = sum_i |z_i|^2 u_i / ||z||^2.
Eigen::VectorXd moment_map(const LinearTorusAction& a, const CVector& z);

// Indices with |z_i| > eps * ||z||, ascending.
std::vector<int> support_of(const CVector& z, double eps);

// Delta(z) = conv{u_i : i in supp(z)}, from an explicit support or from a
// sampled point with threshold eps_supp.
RationalPolytope orbit_moment_image(const LinearTorusAction& a,
                                    const std::vector<int>& support);
RationalPolytope orbit_moment_image(const LinearTorusAction& a, const CVector& z,
                                    double eps_supp);

// Hull of every weight of the action: the moment polytope of the ambient
// projective space.
RationalPolytope moment_polytope(const LinearTorusAction& a);

// u is semistable for z when u lies in Delta(z), polystable when it lies in
// the relative interior. u must lie in the moment polytope of the action;
// anything else throws std::domain_error. The rational overloads test
// exactly, the floating ones within eps.
bool is_semistable(const LinearTorusAction& a, const CVector& z, const RVector& u);
bool is_polystable(const LinearTorusAction& a, const CVector& z, const RVector& u);
bool is_semistable(const LinearTorusAction& a, const CVector& z,
                   const Eigen::VectorXd& u, double eps = defaults::eps_memb);
bool is_polystable(const LinearTorusAction& a, const CVector& z,
                   const Eigen::VectorXd& u, double eps = defaults::eps_memb);

// Enumerates the coordinate supports that actually occur on the variety
// under study (every nonempty subset for projective space itself).
using SupportOracle = std::function<std::vector<std::vector<int>>()>;

// All 2^m - 1 nonempty subsets of {0..m-1}, ascending by mask.
std::vector<std::vector<int>> all_supports(int m);

struct StratCell {
  RationalPolytope cell;
  bool boundary = false;  // touches the boundary of the parent polytope
  QuotientDescriptor descriptor;
};

// The subdivision of the moment polytope into the common refinements
// lambda(u) of the orbit moment images, labelled cell by cell.
struct Stratification {
  RationalPolytope parent;
  std::vector<StratCell> cells;  // ascending dimension

  Subdivision subdivision() const;
  // Face relation: cell i is a proper face of cell j.
  bool precedes(std::size_t i, std::size_t j) const;
};

// Assigns a quotient descriptor to a cell once its boundary flag is known.
using CellLabeler = std::function<QuotientDescriptor(const RationalPolytope&, bool)>;

// Builds the stratification from the supports the oracle yields: the
// distinct Delta polytopes are collected and their common-refinement cells
// lambda(u) computed exactly. Throws std::domain_error when the oracle
// yields nothing, CoverageError when the images fail to cover their hull.
// Without a labeler, boundary cells get Point and interior ones a generic
// curve tag; model-aware callers pass their own.
Stratification stratify(const LinearTorusAction& a, const SupportOracle& oracle,
                        const CellLabeler& labeler = {});

}  // namespace orbitlab
