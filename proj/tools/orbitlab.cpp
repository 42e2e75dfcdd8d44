// Command-line front end: analyze / stratify / verify / classify.
// Exit codes: 0 success, 1 failed checks, 2 usage or malformed input.

#include "orbitlab/json_io.hpp"
#include "orbitlab/orbitspace.hpp"
#include "orbitlab/quadric.hpp"
#include "orbitlab/quotient.hpp"
#include "orbitlab/verify.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using namespace orbitlab;

bool logging_on() {
  const char* v = std::getenv("ORBITLAB_LOG");
  return v != nullptr && *v != '\0';
}

void log_line(const std::string& msg) {
  if (logging_on()) std::cerr << "[orbitlab] " << msg << "\n";
}

void write_json(const std::string& path, const Json& j) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << j.dump(2) << "\n";
  log_line("wrote " + path);
}

long maximal_cells(const Stratification& s) {
  long count = 0;
  for (const StratCell& c : s.cells)
    if (c.cell.dim() == s.parent.dim()) ++count;
  return count;
}

std::string format_vertex(const RVector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v(i).get_str();
  }
  return s + ")";
}

int cmd_analyze(int n, const std::string& out) {
  const QuadricModel model(n);
  const RationalPolytope polytope = model.moment_polytope();

  std::cout << "moment polytope: beta_" << model.pairs() << ", "
            << polytope.vertex_count() << " vertices\n";
  for (int i = 0; i < polytope.vertex_count(); ++i)
    std::cout << "  " << format_vertex(polytope.vertex(i)) << "\n";

  const auto t0 = std::chrono::steady_clock::now();
  const Stratification strat = grassmannian_stratification(model);
  log_line("stratified in " +
           std::to_string(std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - t0)
                              .count()) +
           " s");

  long boundary = 0;
  for (const StratCell& c : strat.cells) boundary += c.boundary ? 1 : 0;
  std::cout << "stratification: " << strat.cells.size() << " cells, "
            << maximal_cells(strat) << " maximal, " << boundary << " on the boundary\n";

  const OrbitSpaceModel assembled = assemble_orbit_space(strat);
  if (!assembled.equivalent_to(grassmannian_orbit_space(n))) {
    std::cerr << "error: assembled orbit space disagrees with the closed form\n";
    return 1;
  }
  std::cout << "verdict: " << assembled.to_string() << "\n";

  write_json(out, Json{{"n", n},
                       {"moment_polytope", to_json(polytope)},
                       {"stratification", to_json(strat)},
                       {"orbit_space", to_json(assembled)}});
  return 0;
}

int cmd_stratify(int n, const std::string& weights_path, const std::string& out) {
  Stratification strat;
  if (n > 0) {
    strat = grassmannian_stratification(QuadricModel(n));
  } else {
    const IMatrix w = read_weight_matrix(weights_path);
    LinearTorusAction action;
    action.weights = w;
    const int coords = action.coords();
    strat = stratify(action, [coords] { return all_supports(coords); });
  }

  std::cout << "cells: " << strat.cells.size() << "\n";
  std::cout << "maximal cells: " << maximal_cells(strat) << "\n";

  const Json j = to_json(strat);
  if (out.empty())
    std::cout << j.dump(2) << "\n";
  else
    write_json(out, j);
  return 0;
}

int cmd_verify(int n, long samples, double tol, std::uint64_t seed,
               const std::string& out) {
  VerifyOptions opts;
  opts.tol = tol;
  const VerificationReport report = run_verification(n, samples, seed, opts);

  for (const CheckResult& c : report.checks)
    std::cout << (c.passed() ? "pass" : "FAIL") << "  " << c.name
              << "  samples=" << c.samples << "  failures=" << c.failures
              << "  max_residual=" << c.max_residual << "\n";
  std::cout << (report.all_passed() ? "all checks passed" : "verification FAILED")
            << " in " << report.wall_seconds << " s\n";

  write_json(out, to_json(report));
  return report.all_passed() ? 0 : 1;
}

int cmd_classify(const std::string& weights_path, const std::string& degrees_path,
                 const std::string& out) {
  OrbitSpaceModel verdict = OrbitSpaceModel::sphere(0, "placeholder");
  if (!weights_path.empty()) {
    verdict = classify_projective_cplx1(read_weight_matrix(weights_path));
  } else {
    const DegreeData data = read_degree_data(degrees_path);
    log_line("degree data: " + std::to_string(data.degrees.size()) + " facets");
    verdict = holes_from_degree_function(data.polytope, data.degrees);
  }
  std::cout << "verdict: " << verdict.to_string() << "\n";
  write_json(out, to_json(verdict));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orbit-space toolkit for torus actions on quadrics and projective spaces"};
  app.require_subcommand(1);

  int analyze_n = 0;
  std::string analyze_out;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "moment polytope, stratification and orbit-space verdict");
  analyze->add_option("--n", analyze_n, "ambient real dimension, n >= 4")->required();
  analyze->add_option("--out", analyze_out, "write a JSON report to this path");

  int stratify_n = 0;
  std::string stratify_weights, stratify_out;
  CLI::App* stratify_cmd = app.add_subcommand(
      "stratify", "orbit moment-image stratification of the moment polytope");
  CLI::Option* sn = stratify_cmd->add_option("--n", stratify_n, "quadric model dimension");
  CLI::Option* sw = stratify_cmd->add_option("--weights", stratify_weights,
                                             "weights JSON for a projective-space action");
  sn->excludes(sw);
  sw->excludes(sn);
  stratify_cmd->add_option("--out", stratify_out, "write the stratification JSON here");

  int verify_n = 0;
  long verify_samples = 0;
  double verify_tol = defaults::orbit_tol;
  std::uint64_t verify_seed = 0;
  std::string verify_out;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Monte Carlo certification of the model's claims");
  verify_cmd->add_option("--n", verify_n, "quadric model dimension")->required();
  verify_cmd->add_option("--samples", verify_samples, "samples per check")->required();
  verify_cmd->add_option("--tol", verify_tol, "check tolerance");
  verify_cmd->add_option("--seed", verify_seed, "deterministic seed")->required();
  verify_cmd->add_option("--out", verify_out, "write the report JSON here");

  std::string classify_weights, classify_degrees, classify_out;
  CLI::App* classify_cmd =
      app.add_subcommand("classify", "orbit-space type from weights or facet degrees");
  CLI::Option* cw = classify_cmd->add_option("--weights", classify_weights,
                                             "weights JSON for a projective-space action");
  CLI::Option* cd = classify_cmd->add_option("--degrees", classify_degrees,
                                             "polytope facet-degree JSON");
  cw->excludes(cd);
  cd->excludes(cw);
  classify_cmd->add_option("--out", classify_out, "write the verdict JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*analyze) return cmd_analyze(analyze_n, analyze_out);
    if (*stratify_cmd) {
      if ((stratify_n > 0) == !stratify_weights.empty()) {
        std::cerr << "error: stratify needs exactly one of --n or --weights\n";
        return 2;
      }
      return cmd_stratify(stratify_n, stratify_weights, stratify_out);
    }
    if (*verify_cmd)
      return cmd_verify(verify_n, verify_samples, verify_tol, verify_seed, verify_out);
    if (*classify_cmd) {
      if (classify_weights.empty() == classify_degrees.empty()) {
        std::cerr << "error: classify needs exactly one of --weights or --degrees\n";
        return 2;
      }
      return cmd_classify(classify_weights, classify_degrees, classify_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
