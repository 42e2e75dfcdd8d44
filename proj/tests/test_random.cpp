#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "orbitlab/projective.hpp"
#include "orbitlab/random.hpp"

#include <cmath>
#include <set>

using namespace orbitlab;

TEST_CASE("identical seeds give identical streams") {
  RandomStream a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.bits() == b.bits());
    CHECK(a.uniform() == b.uniform());
    CHECK(a.gaussian() == b.gaussian());
  }
  RandomStream c(43);
  bool all_equal = true;
  RandomStream a2(42);
  for (int i = 0; i < 16; ++i)
    if (a2.bits() != c.bits()) all_equal = false;
  CHECK(!all_equal);
}

TEST_CASE("uniform stays in [0,1) and gaussian has the right moments") {
  RandomStream rng(7);
  double sum = 0, sum2 = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    double g = rng.gaussian();
    sum += g;
    sum2 += g * g;
  }
  CHECK(std::abs(sum / n) < 0.03);
  CHECK(std::abs(sum2 / n - 1.0) < 0.05);
}

TEST_CASE("unit_complex lands on the circle") {
  RandomStream rng(11);
  for (int i = 0; i < 100; ++i)
    CHECK(std::abs(std::abs(rng.unit_complex()) - 1.0) < 1e-15);
}

TEST_CASE("derived seeds differ across batch indices") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 256; ++i) seen.insert(derive_seed(2026, i));
  CHECK(seen.size() == 256);
  CHECK(derive_seed(2026, 3) == derive_seed(2026, 3));
  CHECK(derive_seed(2026, 3) != derive_seed(2027, 3));
}

TEST_CASE("projective points forget scale and phase") {
  CVector z(3);
  z << Complex(1, 2), Complex(0, -1), Complex(3, 0);
  ProjectivePoint p(z);
  CHECK(std::abs(p.rep().norm() - 1.0) < 1e-15);

  CVector scaled = z * Complex(0.3, 0.4);
  ProjectivePoint q(scaled);
  CHECK(proj_distance(p, q) < 1e-12);
  CHECK((ProjectivePoint(z).canonical() - ProjectivePoint(scaled).canonical())
            .norm() < 1e-12);

  CVector e1 = CVector::Zero(3), e2 = CVector::Zero(3);
  e1(0) = 1;
  e2(1) = 1;
  CHECK(proj_distance(e1, e2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(ProjectivePoint(CVector::Zero(3)), std::invalid_argument);
}
