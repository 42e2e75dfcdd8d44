#include "orbitlab/moment.hpp"

#include <cassert>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace orbitlab {

namespace {

Complex integer_power(const Complex& t, int w) {
  Complex base = w < 0 ? Complex(1.0, 0.0) / t : t;
  int e = w < 0 ? -w : w;
  Complex out(1.0, 0.0);
  while (e > 0) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

}  // namespace

CVector torus_act(const LinearTorusAction& a, const TorusElement& t,
                  const CVector& z) {
  assert(t.size() == a.rank());
  assert(z.size() == a.coords());
  CVector out(z.size());
  for (int i = 0; i < a.coords(); ++i) {
    Complex f(1.0, 0.0);
    for (int j = 0; j < a.rank(); ++j) f *= integer_power(t(j), a.weights(j, i));
    out(i) = f * z(i);
  }
  return out;
}

Eigen::VectorXd moment_map(const LinearTorusAction& a, const CVector& z) {
  assert(z.size() == a.coords());
  const double n2 = z.squaredNorm();
  if (!(n2 > 0.0)) throw std::invalid_argument("moment_map: z must be nonzero");
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(a.rank());
  for (int i = 0; i < a.coords(); ++i) {
    const double w = std::norm(z(i)) / n2;
    for (int j = 0; j < a.rank(); ++j) mu(j) += w * a.weights(j, i);
  }
  return mu;
}

std::vector<int> support_of(const CVector& z, double eps) {
  const double thresh = eps * z.norm();
  std::vector<int> s;
  for (Eigen::Index i = 0; i < z.size(); ++i)
    if (std::abs(z(i)) > thresh) s.push_back(static_cast<int>(i));
  return s;
}

RationalPolytope orbit_moment_image(const LinearTorusAction& a,
                                    const std::vector<int>& support) {
  if (support.empty())
    throw std::invalid_argument("orbit_moment_image: empty support");
  RMatrix pts(a.rank(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j) {
    const int i = support[j];
    if (i < 0 || i >= a.coords())
      throw std::out_of_range("orbit_moment_image: support index");
    for (int r = 0; r < a.rank(); ++r)
      pts(r, static_cast<Eigen::Index>(j)) = Rational(a.weights(r, i));
  }
  return convex_hull(pts);
}

RationalPolytope orbit_moment_image(const LinearTorusAction& a, const CVector& z,
                                    double eps_supp) {
  return orbit_moment_image(a, support_of(z, eps_supp));
}

RationalPolytope moment_polytope(const LinearTorusAction& a) {
  RMatrix pts(a.rank(), a.coords());
  for (int i = 0; i < a.coords(); ++i)
    for (int r = 0; r < a.rank(); ++r) pts(r, i) = Rational(a.weights(r, i));
  return convex_hull(pts);
}

bool is_semistable(const LinearTorusAction& a, const CVector& z, const RVector& u) {
  if (!moment_polytope(a).contains(u))
    throw std::domain_error("is_semistable: u outside the moment polytope");
  return orbit_moment_image(a, z, defaults::eps_supp).contains(u);
}

bool is_polystable(const LinearTorusAction& a, const CVector& z, const RVector& u) {
  if (!moment_polytope(a).contains(u))
    throw std::domain_error("is_polystable: u outside the moment polytope");
  return orbit_moment_image(a, z, defaults::eps_supp).contains_relint(u);
}

bool is_semistable(const LinearTorusAction& a, const CVector& z,
                   const Eigen::VectorXd& u, double eps) {
  if (!moment_polytope(a).contains(u, eps))
    throw std::domain_error("is_semistable: u outside the moment polytope");
  return orbit_moment_image(a, z, defaults::eps_supp).contains(u, eps);
}

bool is_polystable(const LinearTorusAction& a, const CVector& z,
                   const Eigen::VectorXd& u, double eps) {
  if (!moment_polytope(a).contains(u, eps))
    throw std::domain_error("is_polystable: u outside the moment polytope");
  return orbit_moment_image(a, z, defaults::eps_supp).contains_relint(u, eps);
}

std::vector<std::vector<int>> all_supports(int m) {
  if (m < 1 || m > 20) throw std::invalid_argument("all_supports: bad coordinate count");
  std::vector<std::vector<int>> out;
  out.reserve((1u << m) - 1);
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) s.push_back(i);
    out.push_back(std::move(s));
  }
  return out;
}

Subdivision Stratification::subdivision() const {
  Subdivision s;
  s.parent = parent;
  s.cells.reserve(cells.size());
  for (const StratCell& c : cells) s.cells.push_back(c.cell);
  return s;
}

bool Stratification::precedes(std::size_t i, std::size_t j) const {
  if (i == j) return false;
  return cells[j].cell.contains_polytope(cells[i].cell);
}

Stratification stratify(const LinearTorusAction& a, const SupportOracle& oracle,
                        const CellLabeler& labeler) {
  const std::vector<std::vector<int>> supports = oracle();
  if (supports.empty())
    throw std::domain_error("stratify: realizability oracle yields no supports");

  std::vector<RationalPolytope> family;
  std::set<std::string> seen;
  std::set<int> used;
  for (const std::vector<int>& s : supports) {
    RationalPolytope d = orbit_moment_image(a, s);
    if (seen.insert(d.key()).second) family.push_back(std::move(d));
    used.insert(s.begin(), s.end());
  }

  RMatrix pts(a.rank(), static_cast<Eigen::Index>(used.size()));
  Eigen::Index col = 0;
  for (int i : used) {
    for (int r = 0; r < a.rank(); ++r) pts(r, col) = Rational(a.weights(r, i));
    ++col;
  }
  const RationalPolytope parent = convex_hull(pts);

  Subdivision sub;
  sub.parent = parent;
  sub.cells = refine_into_cells(parent, family);
  validate_subdivision(sub);

  Stratification out;
  out.parent = sub.parent;
  out.cells.reserve(sub.cells.size());
  for (RationalPolytope& c : sub.cells) {
    const bool boundary = !out.parent.contains_relint(c.barycenter());
    QuotientDescriptor d =
        labeler ? labeler(c, boundary)
                : (boundary ? QuotientDescriptor::point()
                            : QuotientDescriptor::curve("generic"));
    out.cells.push_back(StratCell{std::move(c), boundary, std::move(d)});
  }
  return out;
}

}  // namespace orbitlab
