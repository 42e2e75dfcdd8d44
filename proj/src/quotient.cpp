#include "orbitlab/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace orbitlab {

namespace {

constexpr double kZero = 1e-14;        // vanishing threshold at unit norm
constexpr double kPhaseSource = 1e-6;  // modulus solid enough to read a phase

QuotientDescriptor quadric_descriptor(bool boundary, const QuadricModel& model) {
  if (boundary) return QuotientDescriptor::point();
  return QuotientDescriptor::projective_space((model.n() + 1) / 2 - 2);
}

}  // namespace

ProjectivePoint q_map(const CVector& z, const QuadricModel& model) {
  const int n = model.n();
  if (z.size() != n) throw std::invalid_argument("q_map: wrong coordinate count");
  const int k = model.pairs();
  const int m = k - 1 + (model.has_fixed_coordinate() ? 1 : 0);
  CVector q(m);
  for (int j = 1; j < k; ++j) q(j - 1) = z(2 * j) * z(2 * j + 1);
  if (model.has_fixed_coordinate()) q(m - 1) = z(n - 1) * z(n - 1);
  if (!(q.norm() > kZero * z.squaredNorm()))
    throw IndeterminacyError("q_map: every defining monomial vanishes");
  return ProjectivePoint(q);
}

std::optional<TorusElement> t_orbit_equivalence(const CVector& z, const CVector& zp,
                                                const QuadricModel& model,
                                                double tol, SolverRecord* record) {
  const int n = model.n(), k = model.pairs();
  if (z.size() != n || zp.size() != n)
    throw std::invalid_argument("t_orbit_equivalence: wrong coordinate count");
  if (std::abs(z.norm() - 1.0) > 1e-9 || std::abs(zp.norm() - 1.0) > 1e-9)
    throw std::domain_error("t_orbit_equivalence: points must be unit representatives");
  if (model.quadric_residual(z) >= defaults::eps_quad ||
      model.quadric_residual(zp) >= defaults::eps_quad)
    throw std::domain_error("t_orbit_equivalence: points must lie on the quadric");

  const LinearTorusAction action = model.action();
  const Eigen::VectorXd mu = moment_map(action, z);
  const double mu_gap = (mu - moment_map(action, zp)).lpNorm<Eigen::Infinity>();
  if (record) record->mu_gap = mu_gap;
  if (!(mu_gap < tol)) return std::nullopt;

  const bool boundary = mu.lpNorm<1>() >= 1.0 - 1e-9;
  if (record) record->boundary = boundary;
  if (!boundary) {
    double q_gap;
    try {
      q_gap = proj_distance(q_map(z, model), q_map(zp, model));
    } catch (const IndeterminacyError&) {
      return std::nullopt;
    }
    if (record) record->q_gap = q_gap;
    if (!(q_gap < tol)) return std::nullopt;
  }

  // zp may be any phase multiple of s.z, and the two slots of a pair see
  // that phase with opposite exponents in their ratios. Read e^{i phi} off
  // the fixed coordinate, or its square off a pair with four solid moduli;
  // when neither exists the surviving slots are untouched by the default.
  Complex phase(1.0, 0.0);
  const bool fixed_usable = model.has_fixed_coordinate() &&
                            std::abs(z(n - 1)) > kPhaseSource &&
                            std::abs(zp(n - 1)) > kPhaseSource;
  if (fixed_usable) {
    const Complex r = zp(n - 1) / z(n - 1);
    phase = r / std::abs(r);
  } else {
    int best = -1;
    double best_m = kPhaseSource;
    for (int j = 0; j < k; ++j) {
      const double m =
          std::min(std::min(std::abs(z(2 * j)), std::abs(zp(2 * j))),
                   std::min(std::abs(z(2 * j + 1)), std::abs(zp(2 * j + 1))));
      if (m > best_m) {
        best_m = m;
        best = j;
      }
    }
    if (best >= 0) {
      const Complex sq =
          (zp(2 * best) / z(2 * best)) * (zp(2 * best + 1) / z(2 * best + 1));
      phase = std::sqrt(sq / std::abs(sq));  // either root works projectively
    }
  }

  TorusElement s(k);
  for (int j = 0; j < k; ++j) {
    const double da = std::abs(z(2 * j)), db = std::abs(zp(2 * j + 1));
    if (da >= db && da > kZero)
      s(j) = (zp(2 * j) / z(2 * j)) / phase;
    else if (db > kZero)
      s(j) = (z(2 * j + 1) / zp(2 * j + 1)) * phase;
    else
      s(j) = Complex(1.0, 0.0);
  }

  double unit_defect = 0.0;
  for (int j = 0; j < k; ++j)
    unit_defect = std::max(unit_defect, std::abs(std::abs(s(j)) - 1.0));
  if (record) record->unit_defect = unit_defect;
  if (!(unit_defect < tol)) return std::nullopt;

  const double residual = proj_distance(torus_act(action, s, z), zp);
  if (record) record->residual = residual;
  if (!(residual < tol)) return std::nullopt;

  if (record) record->s = s;
  return s;
}

QuotientDescriptor quotient_descriptor(const StratCell& cell, const QuadricModel& model) {
  return quadric_descriptor(cell.boundary, model);
}

Stratification grassmannian_stratification(const QuadricModel& model) {
  return stratify(
      model.action(), [&model] { return realizable_supports(model); },
      [&model](const RationalPolytope&, bool boundary) {
        return quadric_descriptor(boundary, model);
      });
}

std::optional<TorusElement> rescale_to_fiber(const CVector& z, const Eigen::VectorXd& u,
                                             const QuadricModel& model) {
  const int n = model.n(), k = model.pairs();
  if (z.size() != n) throw std::invalid_argument("rescale_to_fiber: wrong coordinate count");
  if (u.size() != k) throw std::invalid_argument("rescale_to_fiber: wrong target size");
  if (!(z.squaredNorm() > 0.0))
    throw std::invalid_argument("rescale_to_fiber: z must be nonzero");

  Eigen::VectorXd a(k), b(k);
  for (int j = 0; j < k; ++j) {
    a(j) = std::norm(z(2 * j));
    b(j) = std::norm(z(2 * j + 1));
  }
  const double c = model.has_fixed_coordinate() ? std::norm(z(n - 1)) : 0.0;

  // A positive rescale can neither create nor kill a coordinate, so the
  // sign of each u_j must already be attainable from the pair's moduli.
  for (int j = 0; j < k; ++j) {
    if (u(j) > 0.0 && a(j) == 0.0) return std::nullopt;
    if (u(j) < 0.0 && b(j) == 0.0) return std::nullopt;
    if (u(j) == 0.0 && (a(j) == 0.0) != (b(j) == 0.0)) return std::nullopt;
  }

  // With x_j = r_j^2 forced by pair j's balance a_j x_j - b_j / x_j = u_j N,
  // the normalization must satisfy F(N) = 0 with
  //   F(N) = sum_j sqrt(u_j^2 N^2 + 4 a_j b_j) + c - N,
  // strictly decreasing whenever sum |u_j| < 1.
  auto F = [&](double N) {
    double acc = c - N;
    for (int j = 0; j < k; ++j)
      acc += std::sqrt(u(j) * u(j) * N * N + 4.0 * a(j) * b(j));
    return acc;
  };

  double N = 1.0;
  if (F(0.0) <= 0.0) {
    // Boundary-supported z: F is linear, any N works iff it vanishes.
    if (std::abs(F(1.0)) > 1e-12) return std::nullopt;
  } else {
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (F(hi) > 0.0) {
      hi *= 2.0;
      if (++guard > 200) return std::nullopt;  // sum |u_j| >= 1: no root
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (F(mid) > 0.0 ? lo : hi) = mid;
    }
    N = 0.5 * (lo + hi);
  }

  TorusElement r(k);
  for (int j = 0; j < k; ++j) {
    double x;
    if (a(j) > 0.0) {
      const double S = std::sqrt(u(j) * u(j) * N * N + 4.0 * a(j) * b(j));
      // Two algebraically equal roots; pick the cancellation-free one.
      x = u(j) > 0.0 ? (u(j) * N + S) / (2.0 * a(j)) : 2.0 * b(j) / (S - u(j) * N);
    } else if (b(j) > 0.0) {
      x = -b(j) / (u(j) * N);  // feasibility left only u_j < 0 here
    } else {
      x = 1.0;
    }
    r(j) = Complex(std::sqrt(x), 0.0);
  }
  return r;
}

CVector sample_fiber_point(const Eigen::VectorXd& u, const QuadricModel& model,
                           RandomStream& rng) {
  const int k = model.pairs();
  if (u.size() != k) throw std::invalid_argument("sample_fiber_point: wrong target size");
  if (!(u.lpNorm<1>() < 1.0 - 1e-12))
    throw std::domain_error("sample_fiber_point: u must be strictly interior");
  for (int attempt = 0; attempt < 64; ++attempt) {
    const CVector z = embed_plane(sample_oriented_plane(model.n(), rng));
    if (static_cast<int>(support_of(z, 1e-6).size()) != model.n()) continue;
    const std::optional<TorusElement> r = rescale_to_fiber(z, u, model);
    if (!r) continue;
    CVector w = torus_act(model.action(), *r, z);
    w /= w.norm();
    return w;
  }
  throw std::runtime_error("sample_fiber_point: no full-support sample found");
}

CVector sample_boundary_fiber_point(const RVector& u, const QuadricModel& model,
                                    RandomStream& rng) {
  const int n = model.n(), k = model.pairs();
  if (u.size() != k)
    throw std::invalid_argument("sample_boundary_fiber_point: wrong target size");
  Rational total = 0;
  for (int j = 0; j < k; ++j) total += abs(u(j));
  if (total != 1)
    throw std::domain_error("sample_boundary_fiber_point: need |u|_1 = 1 exactly");

  CVector z = CVector::Zero(n);
  for (int j = 0; j < k; ++j) {
    if (u(j) == 0) continue;
    const Complex slot = std::sqrt(std::abs(to_double(u(j)))) * rng.unit_complex();
    if (u(j) > 0)
      z(2 * j) = slot;
    else
      z(2 * j + 1) = slot;
  }
  z /= z.norm();
  return z;
}

}  // namespace orbitlab
