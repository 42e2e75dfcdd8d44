// Acceptance battery: each criterion prints exactly one PASS/FAIL line and
// carries a wall-clock budget; the binary exits nonzero if any line fails.

#include "orbitlab/moment.hpp"
#include "orbitlab/orbitspace.hpp"
#include "orbitlab/polytope.hpp"
#include "orbitlab/quadric.hpp"
#include "orbitlab/quotient.hpp"
#include "orbitlab/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

using namespace orbitlab;

namespace {

int g_failures = 0;

void run_criterion(int id, const char* label, double budget_s,
                   const std::function<bool(std::string&)>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("threw: ") + e.what();
  }
  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (dt > budget_s) {
    ok = false;
    detail += detail.empty() ? "over budget" : "; over budget";
  }
  std::printf("%s  criterion %d: %s  [%.2fs / %.0fs]%s%s\n", ok ? "PASS" : "FAIL", id,
              label, dt, budget_s, detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

RationalPolytope segment(long a, long b) {
  RMatrix pts(1, 2);
  pts(0, 0) = Rational(a);
  pts(0, 1) = Rational(b);
  return convex_hull(pts);
}

std::multiset<std::string> keys_of(const std::vector<RationalPolytope>& cells) {
  std::multiset<std::string> keys;
  for (const RationalPolytope& c : cells) keys.insert(c.key());
  return keys;
}

// Exact rational point in the relative interior of the facet with the given
// sign pattern: all coordinates nonzero, |u|_1 = 1.
RVector facet_interior_point(const std::vector<int>& signs, RandomStream& rng) {
  const int k = static_cast<int>(signs.size());
  std::vector<long> num(static_cast<std::size_t>(k));
  long total = 0;
  for (int j = 0; j < k; ++j) {
    num[static_cast<std::size_t>(j)] = 1 + static_cast<long>(rng.bits() % 9);
    total += num[static_cast<std::size_t>(j)];
  }
  RVector u(k);
  for (int j = 0; j < k; ++j)
    u(j) = Rational(signs[static_cast<std::size_t>(j)] * num[static_cast<std::size_t>(j)]) /
           Rational(total);
  return u;
}

Eigen::VectorXd random_interior_u(int k, RandomStream& rng) {
  for (;;) {
    Eigen::VectorXd u(k);
    for (int j = 0; j < k; ++j) u(j) = rng.uniform(-1.0, 1.0);
    const double l1 = u.lpNorm<1>();
    if (l1 > 1e-3) return u * (rng.uniform(0.1, 0.85) / l1);
  }
}

TorusElement random_compact(int k, RandomStream& rng) {
  TorusElement t(k);
  for (int j = 0; j < k; ++j) t(j) = rng.unit_complex();
  return t;
}

bool criterion_example_stratification(std::string& detail) {
  LinearTorusAction action;
  action.weights = IMatrix(1, 3);
  action.weights << 1, -1, 0;

  // Every orbit moment image of the action, exactly.
  std::multiset<std::string> images;
  for (const std::vector<int>& support : all_supports(3))
    images.insert(orbit_moment_image(action, support).key());
  const std::multiset<std::string> expected_images = {
      segment(1, 1).key(),   segment(-1, -1).key(), segment(0, 0).key(),
      segment(-1, 0).key(),  segment(0, 1).key(),   segment(-1, 1).key(),
      segment(-1, 1).key()};
  if (images != expected_images) {
    detail = "orbit moment images differ from the listed family";
    return false;
  }

  const Stratification strat = stratify(action, [] { return all_supports(3); });
  std::vector<RationalPolytope> cells;
  for (const StratCell& c : strat.cells) cells.push_back(c.cell);
  const std::multiset<std::string> expected_cells = {
      segment(-1, 0).key(), segment(0, 1).key(), segment(-1, -1).key(),
      segment(0, 0).key(), segment(1, 1).key()};
  if (keys_of(cells) != expected_cells) {
    detail = "cell family differs from the expected five cells";
    return false;
  }
  return true;
}

bool criterion_pipeline_consistency(std::string& detail) {
  const std::vector<std::pair<int, std::string>> pinned = {
      {4, "Disc(2)"}, {5, "Sphere(4)"}, {6, "Sphere(5)"}};
  for (const auto& [n, verdict] : pinned)
    if (grassmannian_orbit_space(n).to_string() != verdict) {
      detail = "n=" + std::to_string(n) + " verdict is not " + verdict;
      return false;
    }
  for (int n = 4; n <= 9; ++n) {
    const Stratification strat = grassmannian_stratification(QuadricModel(n));
    if (!assemble_orbit_space(strat).equivalent_to(grassmannian_orbit_space(n))) {
      detail = "assembled model disagrees at n=" + std::to_string(n);
      return false;
    }
  }
  return true;
}

bool criterion_boundary_single_orbit(std::string& detail) {
  RandomStream rng(301);
  double max_defect = 0.0;
  for (const int n : {5, 6, 7}) {
    const QuadricModel model(n);
    const int k = model.pairs();
    std::vector<int> signs(static_cast<std::size_t>(k), 1);
    for (unsigned long pattern = 0; pattern < (1ul << k); ++pattern) {
      for (int j = 0; j < k; ++j)
        signs[static_cast<std::size_t>(j)] = pattern >> j & 1 ? -1 : 1;
      for (int trial = 0; trial < 500; ++trial) {
        const RVector u = facet_interior_point(signs, rng);
        const CVector z = sample_boundary_fiber_point(u, model, rng);
        const CVector zp = sample_boundary_fiber_point(u, model, rng);
        SolverRecord rec;
        if (!t_orbit_equivalence(z, zp, model, defaults::orbit_tol, &rec)) {
          detail = "solver failed on a facet pair at n=" + std::to_string(n);
          return false;
        }
        max_defect = std::max(max_defect, rec.unit_defect);
      }
    }
  }
  if (max_defect >= 1e-7) {
    detail = "max unit defect " + std::to_string(max_defect);
    return false;
  }
  return true;
}

bool criterion_q_separation(std::string& detail) {
  RandomStream rng(401);
  for (const int n : {6, 7}) {
    const QuadricModel model(n);
    const LinearTorusAction action = model.action();
    const int k = model.pairs();
    for (int trial = 0; trial < 1000; ++trial) {
      const Eigen::VectorXd u = random_interior_u(k, rng);
      const CVector z = sample_fiber_point(u, model, rng);
      const CVector zp = trial % 2 == 0
                             ? torus_act(action, random_compact(k, rng), z)
                             : sample_fiber_point(u, model, rng);
      const bool agree =
          proj_distance(q_map(z, model), q_map(zp, model)) < defaults::orbit_tol;
      const bool verdict =
          t_orbit_equivalence(z, zp, model, defaults::orbit_tol).has_value();
      if (verdict != agree) {
        detail = "verdict/q mismatch at n=" + std::to_string(n) + " trial " +
                 std::to_string(trial);
        return false;
      }
    }
  }
  return true;
}

bool criterion_quadric_moment_invariants(std::string& detail) {
  RandomStream rng(501);
  for (int n = 4; n <= 8; ++n) {
    const QuadricModel model(n);
    const LinearTorusAction action = model.action();
    const RationalPolytope polytope = model.moment_polytope();
    const int k = model.pairs();
    for (int trial = 0; trial < 10000; ++trial) {
      const CVector z = embed_plane(sample_oriented_plane(n, rng));
      if (model.quadric_residual(z) >= 1e-10) {
        detail = "quadric residual too large at n=" + std::to_string(n);
        return false;
      }
      const Eigen::VectorXd u = moment_map(action, z);
      if (!polytope.contains(u, 1e-10)) {
        detail = "moment image left the polytope at n=" + std::to_string(n);
        return false;
      }
      const Eigen::VectorXd ut =
          moment_map(action, torus_act(action, random_compact(k, rng), z));
      if ((ut - u).lpNorm<Eigen::Infinity>() >= 1e-10) {
        detail = "moment map moved under the compact torus at n=" + std::to_string(n);
        return false;
      }
    }
  }
  return true;
}

bool criterion_stellar_subdivision(std::string& detail) {
  for (int n = 6; n <= 9; ++n) {
    const Stratification strat = grassmannian_stratification(QuadricModel(n));
    RVector origin(strat.parent.ambient_dim());
    for (Eigen::Index j = 0; j < origin.size(); ++j) origin(j) = Rational(0);
    if (!subdivision_equal(strat.subdivision(),
                           stellar_subdivision(strat.parent, origin))) {
      detail = "not the stellar subdivision at n=" + std::to_string(n);
      return false;
    }
  }

  const Stratification s4 = grassmannian_stratification(QuadricModel(4));
  if (!subdivision_equal(s4.subdivision(), trivial_subdivision(s4.parent))) {
    detail = "n=4 is not the trivial subdivision";
    return false;
  }

  // n=5 is emitted rather than pinned.
  const Stratification s5 = grassmannian_stratification(QuadricModel(5));
  RVector origin2(2);
  origin2(0) = Rational(0);
  origin2(1) = Rational(0);
  const bool stellar5 =
      subdivision_equal(s5.subdivision(), stellar_subdivision(s5.parent, origin2));
  detail = "n=5 emitted: " + std::to_string(s5.cells.size()) + " cells, n=4: " +
           std::to_string(s4.cells.size()) + " cells" +
           (stellar5 ? ", n=5 matches the stellar subdivision" : "");
  return true;
}

bool criterion_weight_classifier(std::string& detail) {
  const auto matrix = [](int rows, const std::vector<std::vector<int>>& cols) {
    IMatrix w(rows, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i)
      for (int r = 0; r < rows; ++r)
        w(r, static_cast<Eigen::Index>(i)) = cols[i][static_cast<std::size_t>(r)];
    return w;
  };
  const std::vector<std::pair<IMatrix, std::string>> cases = {
      {matrix(1, {{1}, {-1}, {0}}), "Sphere(3)"},
      {matrix(2, {{0, 0}, {1, 0}, {0, 1}, {1, 1}}), "Sphere(4)"},
      {matrix(2, {{0, 0}, {1, 0}, {-1, 0}, {0, 1}}), "Disc(4)"}};
  for (const auto& [w, verdict] : cases)
    if (classify_projective_cplx1(w).to_string() != verdict) {
      detail = "expected " + verdict;
      return false;
    }
  return true;
}

bool criterion_join_map(std::string& detail) {
  RandomStream rng(801);
  std::vector<Eigen::VectorXd> images;
  images.reserve(10000);
  for (int trial = 0; trial < 10000; ++trial) {
    Eigen::VectorXd u = rng.gaussian_vector(3);
    u *= rng.uniform(0.0, 0.999) / std::max(1e-12, u.norm());
    Eigen::VectorXd y = rng.gaussian_vector(3);
    y /= y.norm();
    const Eigen::VectorXd img = holed_sphere_map(u, y);
    if (std::abs(img.norm() - 1.0) >= 1e-12) {
      detail = "image norm off the sphere at trial " + std::to_string(trial);
      return false;
    }
    images.push_back(img);
  }

  // Boundary collapse must be exact on exactly-unit u.
  for (int axis = 0; axis < 3; ++axis)
    for (const double sgn : {1.0, -1.0}) {
      Eigen::VectorXd u = Eigen::VectorXd::Zero(3);
      u(axis) = sgn;
      Eigen::VectorXd ya = rng.gaussian_vector(3), yb = rng.gaussian_vector(3);
      ya /= ya.norm();
      yb /= yb.norm();
      if ((holed_sphere_map(u, ya) - holed_sphere_map(u, yb)).norm() != 0.0) {
        detail = "boundary collapse is not exact";
        return false;
      }
    }

  // Distinct interior classes have distinct images.
  double min_gap = 2.0;
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      const double g = (images[i] - images[j]).squaredNorm();
      if (g < min_gap) min_gap = g;
    }
  if (!(min_gap > 0.0)) {
    detail = "two distinct classes collided";
    return false;
  }
  return true;
}

bool criterion_fano_spot_check(std::string& detail) {
  const Stratification strat = grassmannian_stratification(QuadricModel(5));
  long curve_boundary = 0;
  for (const StratCell& c : strat.cells)
    if (c.boundary &&
        c.descriptor.normalized().kind != QuotientDescriptor::Kind::Point)
      ++curve_boundary;
  if (curve_boundary != 0) {
    detail = std::to_string(curve_boundary) + " boundary cells kept a curve quotient";
    return false;
  }
  const OrbitSpaceModel verdict =
      classify_cplx1_general(strat.parent, {}, QuotientDescriptor::projective_space(1));
  if (verdict.to_string() != "Sphere(4)") {
    detail = "verdict " + verdict.to_string() + " instead of Sphere(4)";
    return false;
  }
  return true;
}

}  // namespace

int main() {
  run_criterion(1, "weight (1,-1,0) stratification reproduces the known cell family",
                1.0, criterion_example_stratification);
  run_criterion(2, "orbit-space pipeline matches the closed form for n=4..9", 5.0,
                criterion_pipeline_consistency);
  run_criterion(3, "boundary fibers are single orbits on every facet (n=5,6,7)", 30.0,
                criterion_boundary_single_orbit);
  run_criterion(4, "q agreement decides interior fiber equivalence (n=6,7)", 60.0,
                criterion_q_separation);
  run_criterion(5, "quadric membership, moment polytope and invariance (n=4..8)", 60.0,
                criterion_quadric_moment_invariants);
  run_criterion(6, "stratification is the stellar subdivision for n=6..9", 10.0,
                criterion_stellar_subdivision);
  run_criterion(7, "weight classifier returns the three pinned verdicts", 1.0,
                criterion_weight_classifier);
  run_criterion(8, "sphere gluing map: unit norm, exact collapse, injectivity", 10.0,
                criterion_join_map);
  run_criterion(9, "n=5: no curve quotient on the boundary, verdict Sphere(4)", 5.0,
                criterion_fano_spot_check);
  return g_failures == 0 ? 0 : 1;
}
