#include "orbitlab/orbitspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>

namespace orbitlab {

namespace {

bool is_rational_curve(const QuotientDescriptor& d) {
  if (d.kind == QuotientDescriptor::Kind::ProjectiveSpace) return d.dim == 1;
  if (d.kind == QuotientDescriptor::Kind::Curve)
    return d.tag == "P1" || d.tag == "rational";
  return false;
}

// Relative interiors meet iff the barycenter of the intersection lies in
// both of them.
bool relint_overlap(const RationalPolytope& a, const RationalPolytope& b) {
  if (a.bbox_disjoint(b)) return false;
  const RationalPolytope inter = intersect(a, b);
  if (inter.is_empty()) return false;
  const RVector bc = inter.barycenter();
  return a.contains_relint(bc) && b.contains_relint(bc);
}

}  // namespace

OrbitSpaceModel OrbitSpaceModel::disc(int d, std::string why) {
  OrbitSpaceModel m;
  m.variant = Variant::Disc;
  m.dim = d;
  m.provenance = std::move(why);
  return m;
}

OrbitSpaceModel OrbitSpaceModel::sphere(int d, std::string why) {
  OrbitSpaceModel m;
  m.variant = Variant::Sphere;
  m.dim = d;
  m.provenance = std::move(why);
  return m;
}

OrbitSpaceModel OrbitSpaceModel::join(int sphere_dim, QuotientDescriptor q,
                                      std::string why) {
  OrbitSpaceModel m;
  m.variant = Variant::Join;
  m.dim = sphere_dim;
  m.quotient = std::move(q);
  m.provenance = std::move(why);
  return m;
}

OrbitSpaceModel OrbitSpaceModel::k_holed_sphere(int d, int k, std::string why) {
  OrbitSpaceModel m;
  m.variant = Variant::KHoledSphere;
  m.dim = d;
  m.holes = k;
  m.provenance = std::move(why);
  return m;
}

OrbitSpaceModel OrbitSpaceModel::product(int polytope_dim, QuotientDescriptor q,
                                         std::string why) {
  OrbitSpaceModel m;
  m.variant = Variant::Product;
  m.dim = polytope_dim;
  m.quotient = std::move(q);
  m.provenance = std::move(why);
  return m;
}

OrbitSpaceModel OrbitSpaceModel::normalized() const {
  OrbitSpaceModel m = *this;
  m.quotient = m.quotient.normalized();
  if (m.variant == Variant::Join) {
    if (m.quotient.kind == QuotientDescriptor::Kind::Point)
      return disc(m.dim + 1, m.provenance);  // cone over the sphere factor
    if (m.quotient.kind == QuotientDescriptor::Kind::ProjectiveSpace &&
        m.quotient.dim == 1)
      return sphere(m.dim + 3, m.provenance);  // S^m * S^2
  }
  if (m.variant == Variant::KHoledSphere && m.holes == 0)
    return sphere(m.dim, m.provenance);
  return m;
}

bool OrbitSpaceModel::equivalent_to(const OrbitSpaceModel& o) const {
  const OrbitSpaceModel a = normalized(), b = o.normalized();
  if (a.variant != b.variant || a.dim != b.dim) return false;
  switch (a.variant) {
    case Variant::KHoledSphere:
      return a.holes == b.holes;
    case Variant::Join:
    case Variant::Product:
      return a.quotient.same_as(b.quotient);
    default:
      return true;
  }
}

std::string OrbitSpaceModel::to_string() const {
  switch (variant) {
    case Variant::Disc:
      return "Disc(" + std::to_string(dim) + ")";
    case Variant::Sphere:
      return "Sphere(" + std::to_string(dim) + ")";
    case Variant::Join:
      return "Join(" + std::to_string(dim) + ", " + quotient.to_string() + ")";
    case Variant::KHoledSphere:
      return "KHoledSphere(" + std::to_string(dim) + ", " + std::to_string(holes) + ")";
    case Variant::Product:
      return "Product(P(dim=" + std::to_string(dim) + "), " + quotient.to_string() + ")";
  }
  return "?";
}

OrbitSpaceModel grassmannian_orbit_space(int n) {
  if (n < 4) throw std::invalid_argument("grassmannian_orbit_space: need n >= 4");
  return OrbitSpaceModel::join(
             n / 2 - 1, QuotientDescriptor::projective_space((n + 1) / 2 - 2),
             "join of the moment-polytope boundary sphere with the interior quotient")
      .normalized();
}

OrbitSpaceModel assemble_orbit_space(const Stratification& strat) {
  if (strat.cells.empty())
    throw std::invalid_argument("assemble_orbit_space: empty stratification");

  const QuotientDescriptor* interior = nullptr;
  for (const StratCell& c : strat.cells) {
    const QuotientDescriptor d = c.descriptor.normalized();
    if (c.boundary) {
      if (d.kind != QuotientDescriptor::Kind::Point)
        throw std::domain_error(
            "assemble_orbit_space: boundary cell without point quotient");
    } else {
      if (interior && !interior->same_as(d))
        throw std::domain_error(
            "assemble_orbit_space: interior cells disagree on the quotient");
      interior = &c.descriptor;
    }
  }
  if (!interior)
    throw std::domain_error("assemble_orbit_space: no interior cell");

  return OrbitSpaceModel::join(
             strat.parent.dim() - 1, *interior,
             "single-chamber gluing: boundary collapses onto the interior quotient")
      .normalized();
}

std::pair<Eigen::VectorXd, ProjectivePoint> join_point_map(const Eigen::VectorXd& u,
                                                           const ProjectivePoint& y,
                                                           double t) {
  if (std::abs(u.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("join_point_map: u must be a unit vector");
  if (t < 0.0 || t > 1.0)
    throw std::domain_error("join_point_map: t must lie in [0, 1]");
  return {t * u, y};
}

JoinPoint join_point_unmap(const Eigen::VectorXd& v, const ProjectivePoint& y) {
  const double r = v.norm();
  if (!(r > 0.0))
    throw std::domain_error("join_point_unmap: the cone point has no unit direction");
  if (r > 1.0 + 1e-9)
    throw std::domain_error("join_point_unmap: v must lie in the unit disc");
  return {v / r, y, r};
}

Eigen::VectorXd holed_sphere_map(const Eigen::VectorXd& u, const Eigen::VectorXd& y) {
  const double r2 = u.squaredNorm();
  if (r2 > 1.0 + 1e-12)
    throw std::domain_error("holed_sphere_map: u must lie in the unit disc");
  if (std::abs(y.norm() - 1.0) > 1e-9)
    throw std::domain_error("holed_sphere_map: y must be a unit vector");
  Eigen::VectorXd out(u.size() + y.size());
  out.head(u.size()) = u;
  out.tail(y.size()) = std::sqrt(std::max(0.0, 1.0 - r2)) * y;
  return out;
}

bool orbit_space_equivalent(const GluedPoint& p, const GluedPoint& q,
                            const Stratification& strat, double tol) {
  if (!strat.parent.contains(p.u, defaults::eps_memb) ||
      !strat.parent.contains(q.u, defaults::eps_memb))
    throw std::domain_error("orbit_space_equivalent: u outside the parent polytope");
  if ((p.u - q.u).lpNorm<Eigen::Infinity>() >= defaults::eps_memb) return false;

  // Cells come sorted by dimension, so the first hit is the cell whose
  // relative interior holds u.
  for (const StratCell& c : strat.cells) {
    if (!c.cell.contains(p.u, defaults::eps_memb)) continue;
    if (c.descriptor.normalized().kind == QuotientDescriptor::Kind::Point) return true;
    return proj_distance(p.y, q.y) < tol;
  }
  throw std::logic_error("orbit_space_equivalent: cells do not cover the parent");
}

OrbitSpaceModel classify_projective_cplx1(const IMatrix& weights) {
  const AffineRelation rel = affine_relation(weights);
  const int d = static_cast<int>(weights.cols()) - 1;

  RMatrix pts(weights.rows(), weights.cols());
  for (Eigen::Index i = 0; i < weights.rows(); ++i)
    for (Eigen::Index j = 0; j < weights.cols(); ++j)
      pts(i, j) = Rational(weights(i, j));
  const auto [core, rest] = join_decompose(pts, rel.support());

  if (rest.is_empty())
    return OrbitSpaceModel::sphere(
        d + 1, "fully supported affine relation: no cone factor");
  return OrbitSpaceModel::disc(
      d + 1, "weights outside the relation support cone off the sphere");
}

OrbitSpaceModel classify_cplx1_general(const RationalPolytope& P,
                                       const std::vector<RationalPolytope>& flagged,
                                       const QuotientDescriptor& generic) {
  const QuotientDescriptor g = generic.normalized();
  if (g.kind == QuotientDescriptor::Kind::Point)
    return OrbitSpaceModel::disc(P.dim(),
                                 "point quotients: the orbit space is the polytope");
  if (g.kind == QuotientDescriptor::Kind::ProjectiveSpace && g.dim != 1)
    throw std::invalid_argument(
        "classify_cplx1_general: generic quotient must be a curve or point");

  for (const RationalPolytope& cell : flagged) {
    if (cell.is_empty() || cell.ambient_dim() != P.ambient_dim() ||
        !P.contains_polytope(cell))
      throw std::invalid_argument("classify_cplx1_general: flagged cell not in P");
    if (P.contains_relint(cell.barycenter()))
      throw std::invalid_argument(
          "classify_cplx1_general: flagged cell must lie in the boundary");
  }
  for (std::size_t i = 0; i < flagged.size(); ++i)
    for (std::size_t j = i + 1; j < flagged.size(); ++j)
      if (relint_overlap(flagged[i], flagged[j]))
        throw OverlapError("classify_cplx1_general: flagged cells overlap");

  if (!is_rational_curve(g))
    return OrbitSpaceModel::product(
        P.dim(), g, "non-rational curve quotient admits no contraction");

  // Hole count: connected groups of flagged cells under shared faces.
  std::vector<std::size_t> root(flagged.size());
  std::iota(root.begin(), root.end(), std::size_t{0});
  const auto find = [&root](std::size_t i) {
    while (root[i] != i) i = root[i] = root[root[i]];
    return i;
  };
  for (std::size_t i = 0; i < flagged.size(); ++i)
    for (std::size_t j = i + 1; j < flagged.size(); ++j)
      if (!flagged[i].bbox_disjoint(flagged[j]) &&
          !intersect(flagged[i], flagged[j]).is_empty())
        root[find(i)] = find(j);
  int k = 0;
  for (std::size_t i = 0; i < flagged.size(); ++i)
    if (find(i) == i) ++k;

  if (k == 0)
    return OrbitSpaceModel::sphere(P.dim() + 2,
                                   "curve quotient contracted over the whole boundary");
  return OrbitSpaceModel::k_holed_sphere(
      P.dim() + 2, k, "one hole per connected uncontracted boundary group");
}

OrbitSpaceModel holes_from_degree_function(const RationalPolytope& P,
                                           const std::map<int, Rational>& facet_degrees) {
  const int nf = static_cast<int>(P.facets().size());
  std::vector<int> positive;
  for (int f = 0; f < nf; ++f) {
    const auto it = facet_degrees.find(f);
    if (it == facet_degrees.end())
      throw std::invalid_argument("holes_from_degree_function: facet without degree");
    if (it->second < 0)
      throw std::invalid_argument("holes_from_degree_function: negative degree");
    if (it->second > 0) positive.push_back(f);
  }

  const std::vector<RationalPolytope::Mask>& masks = P.facet_masks();
  for (std::size_t i = 0; i < positive.size(); ++i)
    for (std::size_t j = i + 1; j < positive.size(); ++j)
      if (masks[static_cast<std::size_t>(positive[i])] &
          masks[static_cast<std::size_t>(positive[j])])
        throw OverlapError("holes_from_degree_function: flagged facets touch");

  std::vector<RationalPolytope> flagged;
  for (int f : positive) {
    const RationalPolytope::Mask m = masks[static_cast<std::size_t>(f)];
    std::vector<RVector> pts;
    for (int v = 0; v < P.vertex_count(); ++v)
      if (m >> v & 1) pts.push_back(P.vertex(v));
    flagged.push_back(convex_hull(pts));
  }
  return classify_cplx1_general(P, flagged, QuotientDescriptor::projective_space(1));
}

}  // namespace orbitlab
