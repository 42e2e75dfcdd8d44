#include "orbitlab/quadric.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace orbitlab {

QuadricModel::QuadricModel(int n) : n_(n) {
  if (n < 4) throw std::invalid_argument("QuadricModel: n must be at least 4");
}

LinearTorusAction QuadricModel::action() const {
  const int k = pairs();
  IMatrix w = IMatrix::Zero(k, n_);
  for (int j = 0; j < k; ++j) {
    w(j, 2 * j) = 1;
    w(j, 2 * j + 1) = -1;
  }
  return {w};
}

RationalPolytope QuadricModel::moment_polytope() const {
  return cross_polytope(pairs());
}

Complex QuadricModel::quadric_value(const CVector& z) const {
  assert(z.size() == n_);
  Complex q(0.0, 0.0);
  for (int j = 0; j < pairs(); ++j) q += z(2 * j) * z(2 * j + 1);
  if (has_fixed_coordinate()) q += z(n_ - 1) * z(n_ - 1);
  return q;
}

double QuadricModel::quadric_residual(const CVector& z) const {
  const double n2 = z.squaredNorm();
  if (!(n2 > 0.0)) throw std::invalid_argument("quadric_residual: z must be nonzero");
  return std::abs(quadric_value(z)) / n2;
}

bool QuadricModel::is_realizable_support(const std::vector<int>& support) const {
  std::vector<bool> in(static_cast<std::size_t>(n_), false);
  bool any = false;
  for (int i : support) {
    if (i < 0 || i >= n_)
      throw std::out_of_range("is_realizable_support: index out of range");
    in[static_cast<std::size_t>(i)] = true;
    any = true;
  }
  if (!any) return false;  // the zero vector is no projective point
  int monomials = 0;
  for (int j = 0; j < pairs(); ++j)
    if (in[static_cast<std::size_t>(2 * j)] && in[static_cast<std::size_t>(2 * j + 1)])
      ++monomials;
  if (has_fixed_coordinate() && in[static_cast<std::size_t>(n_ - 1)]) ++monomials;
  return monomials != 1;
}

OrientedPlane sample_oriented_plane(int n, RandomStream& rng) {
  if (n < 2) throw std::invalid_argument("sample_oriented_plane: n must be >= 2");
  while (true) {
    Eigen::VectorXd a = rng.gaussian_vector(n);
    Eigen::VectorXd b = rng.gaussian_vector(n);
    const double na = a.norm();
    if (na < 1e-8) continue;
    a /= na;
    b -= a.dot(b) * a;
    const double nb = b.norm();
    if (nb < 1e-8) continue;
    b /= nb;
    return {std::move(a), std::move(b)};
  }
}

double frame_orthonormality_error(const OrientedPlane& p) {
  return std::max({std::abs(p.v1.squaredNorm() - 1.0),
                   std::abs(p.v2.squaredNorm() - 1.0),
                   std::abs(p.v1.dot(p.v2))});
}

CVector embed_plane(const OrientedPlane& p) {
  const int n = static_cast<int>(p.v1.size());
  assert(p.v2.size() == n);
  CVector w(n);
  for (int i = 0; i < n; ++i) w(i) = Complex(p.v1(i), p.v2(i));
  CVector z(n);
  for (int j = 0; j < n / 2; ++j) {
    z(2 * j) = w(2 * j) + Complex(0.0, 1.0) * w(2 * j + 1);
    z(2 * j + 1) = w(2 * j) - Complex(0.0, 1.0) * w(2 * j + 1);
  }
  if (n % 2 == 1) z(n - 1) = w(n - 1);
  return z;
}

std::vector<std::vector<int>> realizable_supports(const QuadricModel& model) {
  std::vector<std::vector<int>> out;
  for (std::vector<int>& s : all_supports(model.n()))
    if (model.is_realizable_support(s)) out.push_back(std::move(s));
  return out;
}

}  // namespace orbitlab
