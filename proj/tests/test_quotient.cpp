#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "orbitlab/quotient.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

using namespace orbitlab;

namespace {

CVector cvec(const std::vector<Complex>& entries) {
  CVector v(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = entries[i];
  return v;
}

CVector unit(CVector z) { return z / z.norm(); }

// Strictly interior moment value with a random sign pattern.
Eigen::VectorXd random_interior_u(int k, RandomStream& rng) {
  Eigen::VectorXd w(k);
  double total = 0.0;
  for (int j = 0; j < k; ++j) {
    w(j) = rng.uniform(0.05, 1.0);
    total += w(j);
  }
  const double scale = rng.uniform(0.1, 0.85) / total;
  for (int j = 0; j < k; ++j)
    if (rng.uniform(0.0, 1.0) < 0.5) w(j) = -w(j);
  return w * scale;
}

// Exact rational point in the relative interior of the facet with signs eps.
RVector facet_point(const std::vector<int>& eps, RandomStream& rng) {
  const int k = static_cast<int>(eps.size());
  std::vector<long> r(static_cast<std::size_t>(k));
  long total = 0;
  for (int j = 0; j < k; ++j) {
    r[static_cast<std::size_t>(j)] = 1 + static_cast<long>(rng.uniform(0.0, 50.0));
    total += r[static_cast<std::size_t>(j)];
  }
  RVector u(k);
  for (int j = 0; j < k; ++j)
    u(j) = Rational(eps[static_cast<std::size_t>(j)] * r[static_cast<std::size_t>(j)]) /
           Rational(total);
  return u;
}

TorusElement unit_phases(int k, RandomStream& rng) {
  TorusElement t(k);
  for (int j = 0; j < k; ++j) t(j) = rng.unit_complex();
  return t;
}

TorusElement algebraic_element(int k, RandomStream& rng) {
  TorusElement t(k);
  for (int j = 0; j < k; ++j) t(j) = rng.uniform(0.5, 1.8) * rng.unit_complex();
  return t;
}

}  // namespace

TEST_CASE("q_map values and dimensions") {
  const QuadricModel m6(6);
  const ProjectivePoint q = q_map(unit(cvec({0, 0, 1, 1, 1, -1})), m6);
  CHECK(q.rep().size() == 2);
  CHECK(proj_distance(q, ProjectivePoint(cvec({1, -1}))) < 1e-12);

  CHECK(q_map(unit(cvec({0, 0, 1, 1, 1, -1, 0})), QuadricModel(7)).rep().size() == 3);
  RandomStream rng(derive_seed(20260815, 50));
  for (int n = 4; n <= 9; ++n) {
    const QuadricModel m(n);
    const CVector z = embed_plane(sample_oriented_plane(n, rng));
    CHECK(q_map(z, m).rep().size() == (n + 1) / 2 - 1);
  }
}

TEST_CASE("q_map is undefined exactly over the boundary") {
  const QuadricModel m(6);
  CHECK_THROWS_AS(q_map(cvec({1, 0, 0, 0, 0, 0}), m), IndeterminacyError);

  RandomStream rng(derive_seed(20260815, 51));
  RVector u(3);
  u(0) = Rational(1) / Rational(2);
  u(1) = Rational(-1) / Rational(3);
  u(2) = Rational(1) / Rational(6);
  CHECK_THROWS_AS(q_map(sample_boundary_fiber_point(u, m, rng), m),
                  IndeterminacyError);
}

TEST_CASE("q_map is invariant along algebraic torus orbits") {
  RandomStream rng(derive_seed(20260815, 52));
  for (int n : {5, 6, 7, 9}) {
    const QuadricModel m(n);
    const LinearTorusAction a = m.action();
    for (int trial = 0; trial < 40; ++trial) {
      const CVector z = embed_plane(sample_oriented_plane(n, rng));
      const CVector moved = unit(torus_act(a, algebraic_element(m.pairs(), rng), z));
      CHECK(proj_distance(q_map(z, m), q_map(moved, m)) < 1e-10);
    }
  }
}

TEST_CASE("orbit equivalence on a shared fixed-point fiber") {
  const QuadricModel m(4);
  SolverRecord rec;
  const auto s = t_orbit_equivalence(cvec({1, 0, 0, 0}), cvec({Complex(0, 1), 0, 0, 0}),
                                     m, defaults::orbit_tol, &rec);
  REQUIRE(s.has_value());
  CHECK(std::abs((*s)(0) - Complex(0, 1)) < 1e-12);
  CHECK(std::abs((*s)(1) - Complex(1, 0)) < 1e-12);
  CHECK(rec.boundary);
  CHECK(rec.unit_defect < 1e-12);
  CHECK(rec.residual < 1e-12);
}

TEST_CASE("orbit equivalence rejects distinct moment values") {
  const QuadricModel m(4);
  SolverRecord rec;
  const auto s = t_orbit_equivalence(cvec({1, 0, 0, 0}), cvec({0, 1, 0, 0}), m,
                                     defaults::orbit_tol, &rec);
  CHECK(!s.has_value());
  CHECK(rec.mu_gap == doctest::Approx(2.0));
  CHECK(rec.q_gap == -1.0);  // never reached the q gate
}

TEST_CASE("orbit equivalence preconditions") {
  const QuadricModel m(4);
  CHECK_THROWS_AS(t_orbit_equivalence(cvec({2, 0, 0, 0}), cvec({1, 0, 0, 0}), m),
                  std::domain_error);
  CHECK_THROWS_AS(t_orbit_equivalence(unit(cvec({1, 1, 1, 1})), cvec({1, 0, 0, 0}), m),
                  std::domain_error);
}

TEST_CASE("same-orbit pairs are recovered with unit certificates") {
  RandomStream rng(derive_seed(20260815, 53));
  for (int n : {5, 6, 7}) {
    const QuadricModel m(n);
    const LinearTorusAction a = m.action();
    for (int trial = 0; trial < 30; ++trial) {
      const CVector z = sample_fiber_point(random_interior_u(m.pairs(), rng), m, rng);

      // Compact move: trivially on the same fiber.
      const CVector zc = unit(torus_act(a, unit_phases(m.pairs(), rng), z));
      SolverRecord rec;
      auto s = t_orbit_equivalence(z, zc, m, defaults::orbit_tol, &rec);
      REQUIRE(s.has_value());
      CHECK(rec.unit_defect < 1e-9);
      CHECK(rec.residual < 1e-9);
      CHECK(proj_distance(torus_act(a, *s, z), zc) < 1e-9);

      // Algebraic move pushed back onto the fiber.
      const CVector za = unit(torus_act(a, algebraic_element(m.pairs(), rng), z));
      const auto r = rescale_to_fiber(za, moment_map(a, z), m);
      REQUIRE(r.has_value());
      const CVector zb = unit(torus_act(a, *r, za));
      s = t_orbit_equivalence(z, zb, m, defaults::orbit_tol, &rec);
      REQUIRE(s.has_value());
      CHECK(rec.unit_defect < 1e-9);
    }
  }
}

TEST_CASE("equivalence verdict matches q agreement on interior fibers") {
  RandomStream rng(derive_seed(20260815, 54));
  for (int n : {6, 7}) {
    const QuadricModel m(n);
    const LinearTorusAction a = m.action();
    for (int trial = 0; trial < 120; ++trial) {
      const Eigen::VectorXd u = random_interior_u(m.pairs(), rng);
      const CVector z1 = sample_fiber_point(u, m, rng);
      CVector z2;
      if (trial % 2 == 0)
        z2 = unit(torus_act(a, unit_phases(m.pairs(), rng), z1));
      else
        z2 = sample_fiber_point(u, m, rng);  // independent orbit, same fiber

      const bool q_agrees =
          proj_distance(q_map(z1, m), q_map(z2, m)) < defaults::orbit_tol;
      const auto s = t_orbit_equivalence(z1, z2, m);
      CHECK(s.has_value() == q_agrees);
    }
  }
}

TEST_CASE("boundary fibers are single orbits facet by facet") {
  RandomStream rng(derive_seed(20260815, 55));
  for (int n : {5, 6, 7}) {
    const QuadricModel m(n);
    const int k = m.pairs();
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      std::vector<int> eps(static_cast<std::size_t>(k));
      for (int j = 0; j < k; ++j) eps[static_cast<std::size_t>(j)] = (mask >> j & 1) ? 1 : -1;
      for (int pair = 0; pair < 10; ++pair) {
        const RVector u = facet_point(eps, rng);
        const CVector z1 = sample_boundary_fiber_point(u, m, rng);
        const CVector z2 = sample_boundary_fiber_point(u, m, rng);
        SolverRecord rec;
        const auto s = t_orbit_equivalence(z1, z2, m, defaults::orbit_tol, &rec);
        REQUIRE(s.has_value());
        CHECK(rec.boundary);
        CHECK(rec.unit_defect < 1e-7);
        CHECK(rec.residual < 1e-7);
      }
    }
  }
}

TEST_CASE("boundary points of distinct facets are inequivalent") {
  RandomStream rng(derive_seed(20260815, 56));
  const QuadricModel m(6);
  const CVector z1 = sample_boundary_fiber_point(facet_point({1, 1, 1}, rng), m, rng);
  const CVector z2 = sample_boundary_fiber_point(facet_point({-1, 1, 1}, rng), m, rng);
  CHECK(!t_orbit_equivalence(z1, z2, m).has_value());
}

TEST_CASE("vertex fibers") {
  RandomStream rng(derive_seed(20260815, 57));
  const QuadricModel m(6);
  RVector u = RVector::Zero(3);
  u(1) = Rational(-1);
  const CVector z1 = sample_boundary_fiber_point(u, m, rng);
  const CVector z2 = sample_boundary_fiber_point(u, m, rng);
  CHECK(support_of(z1, 1e-9) == std::vector<int>{3});
  CHECK(t_orbit_equivalence(z1, z2, m).has_value());
}

TEST_CASE("rescale_to_fiber hits its target") {
  RandomStream rng(derive_seed(20260815, 58));
  for (int n : {4, 5, 7, 8}) {
    const QuadricModel m(n);
    const LinearTorusAction a = m.action();
    for (int trial = 0; trial < 25; ++trial) {
      const CVector z = embed_plane(sample_oriented_plane(n, rng));
      const Eigen::VectorXd u = random_interior_u(m.pairs(), rng);
      const auto r = rescale_to_fiber(z, u, m);
      REQUIRE(r.has_value());
      for (int j = 0; j < m.pairs(); ++j) {
        CHECK((*r)(j).imag() == 0.0);
        CHECK((*r)(j).real() > 0.0);
      }
      const CVector w = unit(torus_act(a, *r, z));
      CHECK((moment_map(a, w) - u).lpNorm<Eigen::Infinity>() < 1e-12);
      CHECK(m.quadric_residual(w) < 1e-12);
    }
  }
}

TEST_CASE("rescale_to_fiber detects unreachable targets") {
  const QuadricModel m(4);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(2);
  // A fixed point cannot move off its vertex.
  CHECK(!rescale_to_fiber(cvec({1, 0, 0, 0}), u, m).has_value());
  u << 0.9, 0.9;  // outside beta_2
  RandomStream rng(derive_seed(20260815, 59));
  const CVector z = embed_plane(sample_oriented_plane(4, rng));
  CHECK(!rescale_to_fiber(z, u, m).has_value());
}

TEST_CASE("rescale_to_fiber slides along the boundary") {
  RandomStream rng(derive_seed(20260815, 60));
  const QuadricModel m(6);
  const RVector u0 = facet_point({1, -1, 1}, rng);
  const CVector z = sample_boundary_fiber_point(u0, m, rng);
  Eigen::VectorXd target(3);
  target << 0.2, -0.5, 0.3;  // same facet, same signs
  const auto r = rescale_to_fiber(z, target, m);
  REQUIRE(r.has_value());
  const CVector w = unit(torus_act(m.action(), *r, z));
  CHECK((moment_map(m.action(), w) - target).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("fiber samplers satisfy their contracts") {
  RandomStream rng(derive_seed(20260815, 61));
  const QuadricModel m(7);
  const Eigen::VectorXd u = random_interior_u(3, rng);
  const CVector z = sample_fiber_point(u, m, rng);
  CHECK(std::abs(z.norm() - 1.0) < 1e-12);
  CHECK(m.quadric_residual(z) < 1e-12);
  CHECK((moment_map(m.action(), z) - u).lpNorm<Eigen::Infinity>() < 1e-11);

  Eigen::VectorXd far(3);
  far << 0.7, 0.7, 0.7;
  CHECK_THROWS_AS(sample_fiber_point(far, m, rng), std::domain_error);

  RVector ub(3);
  ub(0) = Rational(1) / Rational(4);
  ub(1) = Rational(1) / Rational(2);
  ub(2) = Rational(-1) / Rational(4);
  const CVector zb = sample_boundary_fiber_point(ub, m, rng);
  CHECK(std::abs(zb.norm() - 1.0) < 1e-12);
  CHECK(m.quadric_residual(zb) == 0.0);
  Eigen::VectorXd ubd(3);
  ubd << 0.25, 0.5, -0.25;
  CHECK((moment_map(m.action(), zb) - ubd).lpNorm<Eigen::Infinity>() < 1e-12);

  ub(2) = Rational(-1) / Rational(8);  // |u|_1 != 1
  CHECK_THROWS_AS(sample_boundary_fiber_point(ub, m, rng), std::domain_error);
}

TEST_CASE("quotient descriptors by cell position") {
  const QuadricModel m6(6);
  const Stratification s6 = grassmannian_stratification(m6);
  CHECK(s6.cells.size() == 53);  // stellar beta_3: 26 faces + 26 cones + center
  for (const StratCell& c : s6.cells) {
    const QuotientDescriptor d = quotient_descriptor(c, m6);
    CHECK(d.same_as(c.descriptor));
    if (c.boundary) {
      CHECK(d.kind == QuotientDescriptor::Kind::Point);
      CHECK(d.contracts);
    } else {
      CHECK(d.kind == QuotientDescriptor::Kind::ProjectiveSpace);
      CHECK(d.dim == 1);
    }
  }

  const QuadricModel m7(7);
  const Stratification s7 = grassmannian_stratification(m7);
  for (const StratCell& c : s7.cells)
    if (!c.boundary) CHECK(c.descriptor.dim == 2);

  // n=4: interior quotient is P^0, which is a point.
  const QuadricModel m4(4);
  const Stratification s4 = grassmannian_stratification(m4);
  for (const StratCell& c : s4.cells)
    if (!c.boundary) {
      CHECK(c.descriptor.kind == QuotientDescriptor::Kind::ProjectiveSpace);
      CHECK(c.descriptor.same_as(QuotientDescriptor::point()));
    }
}
