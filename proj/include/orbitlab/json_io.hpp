#pragma once

// JSON serialization for reports and geometric objects, plus the two input
// file formats the CLI accepts. Exact values are emitted as [num, den]
// integer pairs; floating values as IEEE doubles.

#include "orbitlab/moment.hpp"
#include "orbitlab/orbitspace.hpp"
#include "orbitlab/polytope.hpp"
#include "orbitlab/quotient.hpp"
#include "orbitlab/types.hpp"
#include "orbitlab/verify.hpp"

#include "json.hpp"

#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace orbitlab {

using Json = nlohmann::json;

inline Json to_json(const Rational& v) {
  Rational c = v;
  c.canonicalize();
  const Integer num = c.get_num(), den = c.get_den();
  if (!num.fits_slong_p() || !den.fits_slong_p())
    throw std::domain_error("json_io: rational exceeds 64-bit range");
  return Json::array({num.get_si(), den.get_si()});
}

inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_array() && j.size() == 2 && j[0].is_number_integer() &&
      j[1].is_number_integer()) {
    const long den = j[1].get<long>();
    if (den == 0) throw std::invalid_argument("json_io: zero denominator");
    return Rational(j[0].get<long>()) / Rational(den);
  }
  throw std::invalid_argument("json_io: expected an integer or a [num, den] pair");
}

inline Json to_json(const RVector& u) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < u.size(); ++i) a.push_back(to_json(u(i)));
  return a;
}

inline Json to_json(const RationalPolytope& p) {
  Json verts = Json::array();
  for (int i = 0; i < p.vertex_count(); ++i) verts.push_back(to_json(p.vertex(i)));
  return Json{{"dimension", p.dim()}, {"vertices", std::move(verts)}};
}

inline Json to_json(const Subdivision& s) {
  Json cells = Json::array();
  for (const RationalPolytope& c : s.cells) cells.push_back(to_json(c));
  return Json{{"parent", to_json(s.parent)}, {"cells", std::move(cells)}};
}

inline Json to_json(const QuotientDescriptor& d) {
  Json j{{"label", d.to_string()}, {"contracts", d.contracts}};
  switch (d.kind) {
    case QuotientDescriptor::Kind::Point:
      j["kind"] = "point";
      break;
    case QuotientDescriptor::Kind::ProjectiveSpace:
      j["kind"] = "projective-space";
      j["dim"] = d.dim;
      break;
    case QuotientDescriptor::Kind::Curve:
      j["kind"] = "curve";
      j["tag"] = d.tag;
      break;
  }
  return j;
}

inline Json to_json(const StratCell& c) {
  Json j = to_json(c.cell);
  j["boundary"] = c.boundary;
  j["descriptor"] = to_json(c.descriptor);
  return j;
}

inline Json to_json(const Stratification& s) {
  Json cells = Json::array();
  for (const StratCell& c : s.cells) cells.push_back(to_json(c));
  return Json{{"parent", to_json(s.parent)}, {"cells", std::move(cells)}};
}

inline Json to_json(const OrbitSpaceModel& m) {
  const char* variant = "?";
  switch (m.variant) {
    case OrbitSpaceModel::Variant::Disc: variant = "disc"; break;
    case OrbitSpaceModel::Variant::Sphere: variant = "sphere"; break;
    case OrbitSpaceModel::Variant::Join: variant = "join"; break;
    case OrbitSpaceModel::Variant::KHoledSphere: variant = "k-holed-sphere"; break;
    case OrbitSpaceModel::Variant::Product: variant = "product"; break;
  }
  Json j{{"verdict", m.to_string()},
         {"variant", variant},
         {"dim", m.dim},
         {"provenance", m.provenance}};
  if (m.variant == OrbitSpaceModel::Variant::KHoledSphere) j["holes"] = m.holes;
  if (m.variant == OrbitSpaceModel::Variant::Join ||
      m.variant == OrbitSpaceModel::Variant::Product)
    j["quotient"] = to_json(m.quotient);
  return j;
}

inline Json to_json(const SolverRecord& r) {
  Json j{{"pair", r.pair_id},       {"mu_gap", r.mu_gap},
         {"q_gap", r.q_gap},        {"boundary", r.boundary},
         {"unit_defect", r.unit_defect}, {"residual", r.residual}};
  if (r.s) {
    Json s = Json::array();
    for (Eigen::Index i = 0; i < r.s->size(); ++i)
      s.push_back(Json::array({(*r.s)(i).real(), (*r.s)(i).imag()}));
    j["s"] = std::move(s);
  } else {
    j["s"] = nullptr;
  }
  return j;
}

inline Json to_json(const CheckResult& c) {
  return Json{{"name", c.name},
              {"samples", c.samples},
              {"failures", c.failures},
              {"max_residual", c.max_residual},
              {"worst_sample", c.worst_sample},
              {"passed", c.passed()}};
}

inline Json to_json(const VerificationReport& r) {
  Json checks = Json::array();
  for (const CheckResult& c : r.checks) checks.push_back(to_json(c));
  return Json{{"n", r.n},
              {"seed", r.seed},
              {"samples_per_check", r.samples_per_check},
              {"tol", r.tol},
              {"wall_seconds", r.wall_seconds},
              {"all_passed", r.all_passed()},
              {"checks", std::move(checks)}};
}

inline Json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("json_io: cannot open " + path);
  return Json::parse(in);
}

// {"weights": [[..], ..]}: one integer vector per coordinate, equal
// lengths, at least one weight. Returned with one column per weight.
inline IMatrix read_weight_matrix(const std::string& path) {
  const Json j = parse_json_file(path);
  if (!j.contains("weights") || !j["weights"].is_array() || j["weights"].empty())
    throw std::invalid_argument("json_io: " + path +
                                " needs a nonempty weights array");
  const Json& w = j["weights"];
  if (!w[0].is_array() || w[0].empty())
    throw std::invalid_argument("json_io: weights must be integer vectors");
  const Eigen::Index rows = static_cast<Eigen::Index>(w[0].size());
  IMatrix m(rows, static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!w[i].is_array() || static_cast<Eigen::Index>(w[i].size()) != rows)
      throw std::invalid_argument("json_io: ragged weights array");
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (!w[i][static_cast<std::size_t>(r)].is_number_integer())
        throw std::invalid_argument("json_io: weights must be integers");
      m(r, static_cast<Eigen::Index>(i)) = w[i][static_cast<std::size_t>(r)].get<int>();
    }
  }
  return m;
}

struct DegreeData {
  RationalPolytope polytope;
  std::map<int, Rational> degrees;
};

// {"vertices": [[rational, ..], ..], "facets": [{"vertices": [ids],
// "degree": rational}, ..]}. Facet vertex ids index the file's vertex
// list; they are matched to the canonical vertex order of the hull.
inline DegreeData read_degree_data(const std::string& path) {
  const Json j = parse_json_file(path);
  if (!j.contains("vertices") || !j["vertices"].is_array() || j["vertices"].empty())
    throw std::invalid_argument("json_io: " + path + " needs a vertices array");
  if (!j.contains("facets") || !j["facets"].is_array())
    throw std::invalid_argument("json_io: " + path + " needs a facets array");

  std::vector<RVector> file_verts;
  for (const Json& row : j["vertices"]) {
    if (!row.is_array() || row.empty())
      throw std::invalid_argument("json_io: vertices must be coordinate arrays");
    RVector v(static_cast<Eigen::Index>(row.size()));
    for (std::size_t c = 0; c < row.size(); ++c)
      v(static_cast<Eigen::Index>(c)) = rational_from_json(row[c]);
    file_verts.push_back(std::move(v));
  }

  DegreeData data;
  data.polytope = convex_hull(file_verts);

  // File vertex id -> canonical id, by exact coordinate match.
  const auto canonical_id = [&](int file_id) {
    if (file_id < 0 || file_id >= static_cast<int>(file_verts.size()))
      throw std::invalid_argument("json_io: facet vertex id out of range");
    for (int v = 0; v < data.polytope.vertex_count(); ++v)
      if (data.polytope.vertex(v) == file_verts[static_cast<std::size_t>(file_id)])
        return v;
    throw std::invalid_argument("json_io: listed point is not a vertex of the hull");
  };

  for (const Json& f : j["facets"]) {
    if (!f.contains("vertices") || !f["vertices"].is_array() || !f.contains("degree"))
      throw std::invalid_argument("json_io: each facet needs vertices and a degree");
    std::vector<int> ids;
    for (const Json& id : f["vertices"]) {
      if (!id.is_number_integer())
        throw std::invalid_argument("json_io: facet vertex ids must be integers");
      ids.push_back(canonical_id(id.get<int>()));
    }
    const auto facet = data.polytope.facet_index(ids);
    if (!facet)
      throw std::invalid_argument("json_io: listed vertex set is not a facet");
    data.degrees[*facet] = rational_from_json(f["degree"]);
  }
  return data;
}

}  // namespace orbitlab
