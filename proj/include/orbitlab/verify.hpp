#pragma once

// Monte Carlo certification harness: a fixed battery of property checks on
// the quadric model, batched over derived random streams so that a report
// is reproducible bit for bit from its seed.

#include "orbitlab/defaults.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace orbitlab {

struct CheckResult {
  std::string name;
  long samples = 0;
  long failures = 0;
  double max_residual = 0.0;
  // Identifies the worst sample: the first failure, else the largest residual.
  std::string worst_sample;

  bool passed() const { return failures == 0; }
};

struct VerificationReport {
  int n = 0;
  std::uint64_t seed = 0;
  long samples_per_check = 0;
  double tol = 0.0;
  std::vector<CheckResult> checks;
  double wall_seconds = 0.0;

  bool all_passed() const;
  const CheckResult* check(const std::string& name) const;
};

struct VerifyOptions {
  double tol = defaults::orbit_tol;
  int threads = 0;                 // 0: one worker per hardware thread
  bool inject_corruption = false;  // self-test: plant one off-quadric point
};

// Runs the battery, one CheckResult per check, in this order:
//   quadric-membership, moment-in-polytope, boundary-characterization,
//   boundary-single-orbit, interior-q-separation, q-invariance,
//   stratification-exactness.
// Sampled checks draw `samples` points each from per-batch streams derived
// from `seed`; batches own disjoint index ranges, so the thread count never
// changes the report (wall_seconds aside). Any failed sample fails its
// check: every statement tested here holds exactly, so the budget is zero.
// Throws std::invalid_argument for n < 4 or samples < 1; module errors
// surface as std::runtime_error carrying the offending sample.
VerificationReport run_verification(int n, long samples, double tol,
                                    std::uint64_t seed);
VerificationReport run_verification(int n, long samples, std::uint64_t seed,
                                    const VerifyOptions& opts);

}  // namespace orbitlab
