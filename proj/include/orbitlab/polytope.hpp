#pragma once

// Exact rational polytopes in V-representation with full face lattices.
//
// Everything combinatorial here is decided over Q: supporting hyperplanes,
// face identity, containment, volumes. Doubles appear only as prefilter
// shadows and in the tolerance-based membership overloads.
//
// Dimensions stay small (<= ~6), so supporting hyperplanes are found by
// enumerating point subsets, and vertex enumeration after a halfspace cut
// walks the 1-skeleton. Polytope identity is the canonical vertex list.

#include "orbitlab/types.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace orbitlab {

struct Halfspace {
  RVector a;   // outward normal, primitive integer entries
  Rational c;  // polytope satisfies a . x <= c
};

struct Hyperplane {
  RVector a;
  Rational c;  // a . x == c on the affine hull
};

// Exact coordinates on the affine hull of a point set:
//   t = inv * (x - base)[pivot_rows],   x = base + basis * t.
struct AffineChart {
  int ambient = 0;
  RVector base;
  std::vector<int> pivot_rows;
  RMatrix inv;    // r x r
  RMatrix basis;  // ambient x r

  int dim() const { return static_cast<int>(pivot_rows.size()); }
  RVector to_chart(const RVector& x) const;
  RVector to_ambient(const RVector& t) const;
};

class RationalPolytope {
 public:
  using Mask = std::uint64_t;

  struct Face {
    Mask mask;
    int dim;
  };

  RationalPolytope() = default;  // empty polytope in ambient dimension 0

  static RationalPolytope empty(int ambient_dim);

  int ambient_dim() const { return ambient_; }
  int dim() const { return dim_; }
  bool is_empty() const { return dim_ < 0; }
  int vertex_count() const { return static_cast<int>(verts_.cols()); }
  const RMatrix& vertices() const { return verts_; }
  RVector vertex(int i) const { return verts_.col(i); }
  const Eigen::MatrixXd& vertices_d() const { return verts_d_; }

  Mask full_mask() const;
  // Proper nonempty faces, sorted by (dim, mask). Facets included.
  const std::vector<Face>& proper_faces() const { return faces_; }
  std::vector<Mask> faces_of_dim(int d) const;
  bool has_face(Mask m) const;

  const std::vector<Halfspace>& facets() const { return facets_; }
  const std::vector<Mask>& facet_masks() const { return facet_masks_; }
  std::optional<int> facet_index(const std::vector<int>& vertex_ids) const;
  const std::vector<Hyperplane>& affine_hull() const { return affine_eqs_; }
  const AffineChart& chart() const { return chart_; }
  const RMatrix& chart_coords() const { return chart_coords_; }

  bool contains(const RVector& u) const;
  bool contains_relint(const RVector& u) const;
  bool contains(const Eigen::VectorXd& u, double tol) const;
  bool contains_relint(const Eigen::VectorXd& u, double tol) const;
  bool contains_polytope(const RationalPolytope& q) const;

  RVector barycenter() const;             // of all vertices; in relint
  RVector barycenter(Mask face) const;    // of a face's vertices

  // Euclidean volume for full-dimensional polytopes; chart-relative for
  // lower-dimensional ones (0-dimensional count 1, empty 0). Use
  // volume_in_chart to compare cells of a common parent.
  Rational volume() const;

  // Canonical identity: serialized sorted vertex list.
  const std::string& key() const { return key_; }
  bool same_as(const RationalPolytope& q) const { return key_ == q.key_; }

  const RVector& bbox_min() const { return bb_min_; }
  const RVector& bbox_max() const { return bb_max_; }
  bool bbox_disjoint(const RationalPolytope& q) const;

  friend RationalPolytope convex_hull(const RMatrix& points);
  friend RationalPolytope cut(const RationalPolytope& p, const RVector& a,
                              const Rational& c, bool equality);

 private:
  int ambient_ = 0;
  int dim_ = -1;
  RMatrix verts_;          // ambient x m, canonical (lex) order
  RMatrix chart_coords_;   // dim x m
  Eigen::MatrixXd verts_d_;
  AffineChart chart_;
  std::vector<Hyperplane> affine_eqs_;
  std::vector<Halfspace> facets_;
  std::vector<Mask> facet_masks_;
  std::vector<Face> faces_;
  std::string key_;
  RVector bb_min_, bb_max_;
  Eigen::MatrixXd facet_rows_d_;  // unit rows [a c] for prefilters
  Eigen::MatrixXd eq_rows_d_;

  void finish(bool rebuild_lattice);
  std::vector<std::vector<int>> triangulate() const;
  friend Rational volume_in_chart(const AffineChart& chart,
                                  const RationalPolytope& cell);
};

RationalPolytope convex_hull(const RMatrix& points);
RationalPolytope convex_hull(const std::vector<RVector>& points);

// conv(+-e_1, ..., +-e_k) in Q^k.
RationalPolytope cross_polytope(int k);

// Intersection with a halfspace a.x <= c (equality = false) or a
// hyperplane a.x == c (equality = true).
RationalPolytope cut(const RationalPolytope& p, const RVector& a,
                     const Rational& c, bool equality);

RationalPolytope intersect(const RationalPolytope& p, const RationalPolytope& q);

// Split the columns of `points` by membership in K: returns (hull of the
// K-columns, hull of the rest). The second factor may be empty.
std::pair<RationalPolytope, RationalPolytope> join_decompose(
    const RMatrix& points, const std::vector<int>& k_indices);

struct Subdivision {
  RationalPolytope parent;
  std::vector<RationalPolytope> cells;  // sorted by (dim, key)
};

// Cells: cones conv(F ∪ {center}) over every proper nonempty face F, the
// center itself, and the proper faces as boundary cells. center must lie
// in the relative interior of p.
Subdivision stellar_subdivision(const RationalPolytope& p, const RVector& center);

// The faces of p together with p itself.
Subdivision trivial_subdivision(const RationalPolytope& p);

// Common-refinement cells induced on f(q) by the images of the faces of q
// under the linear map f (rows x ambient_dim(q), surjective).
Subdivision project_subdivision(const RationalPolytope& q, const RMatrix& f);

bool subdivision_equal(const Subdivision& a, const Subdivision& b);

// Exact invariants: cells inside parent, maximal cells fill the volume,
// relative interiors pairwise disjoint. Throws std::logic_error.
void validate_subdivision(const Subdivision& s);

Rational volume_in_chart(const AffineChart& chart, const RationalPolytope& cell);

// Raised when a refinement family fails to cover the parent polytope.
struct CoverageError : std::domain_error {
  using std::domain_error::domain_error;
};

// The cells { ⋂ {Δ in family : u in Δ} : u in parent }: guided exact
// splitting finds the top-dimensional cells, face probes the rest.
// Requires the family to cover parent.
std::vector<RationalPolytope> refine_into_cells(
    const RationalPolytope& parent, const std::vector<RationalPolytope>& family);

}  // namespace orbitlab
