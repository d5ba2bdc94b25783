#pragma once

// JSON records for results, traces, LP violations, and planted-instance
// sidecars.

#include <fstream>
#include <string>

#include "dks/caterpillar.hpp"
#include "dks/error.hpp"
#include "dks/lp.hpp"
#include "dks/random_models.hpp"
#include "dks/result.hpp"
#include "json.hpp"

namespace dks {

using Json = nlohmann::ordered_json;

inline Json to_json(const VertexSet& s) {
  Json a = Json::array();
  for (Vertex v : s) a.push_back(v);
  return a;
}

inline VertexSet vertex_set_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an array of vertex ids", 0);
  std::vector<Vertex> v;
  for (const auto& e : j) {
    if (!e.is_number_unsigned()) throw ParseError("vertex ids must be non-negative integers", 0);
    v.push_back(e.get<Vertex>());
  }
  return VertexSet(std::move(v));
}

inline Json to_json(const SolveResult& r) {
  Json j;
  j["vertices"] = to_json(r.vertices);
  j["size"] = r.vertices.size();
  j["density"] = r.density;
  j["provenance"] = r.provenance;
  if (r.rs) j["rs"] = {r.rs->first, r.rs->second};
  j["gamma"] = r.gamma;
  if (r.target_ratio) j["target_ratio"] = *r.target_ratio;
  return j;
}

inline Json to_json(const CandidateTrace& tr) {
  Json steps = Json::array();
  for (int t = 0; t <= tr.s; ++t) {
    Json step;
    step["t"] = t;
    step["kind"] = t == 0 ? "start" : to_string(tr.kinds[static_cast<std::size_t>(t - 1)]);
    step["size"] = tr.size(t);
    const auto [num, den] = tr.fractional_exponents[static_cast<std::size_t>(t)];
    step["fractional_exponent"] = std::to_string(num) + "/" + std::to_string(den);
    step["predicted"] = tr.predicted(t);
    steps.push_back(step);
  }
  Json j;
  j["r"] = tr.r;
  j["s"] = tr.s;
  j["n"] = tr.n;
  j["steps"] = steps;
  return j;
}

inline Json to_json(const FeasibilityReport& rep) {
  Json v = Json::array();
  for (const auto& x : rep.violations) {
    Json e;
    e["id"] = x.id;
    e["family"] = x.family;
    e["residual"] = x.residual;
    e["level"] = x.level;
    v.push_back(e);
  }
  Json j;
  j["feasible"] = rep.feasible;
  j["checked"] = rep.checked;
  j["violation_count"] = rep.violation_count;
  j["violations"] = v;
  return j;
}

inline Json sidecar_json(const PlantedInstance& inst) {
  Json j;
  j["model"] = to_string(inst.model);
  Json p;
  p["n"] = inst.params.n;
  p["alpha"] = inst.params.alpha;
  p["k"] = inst.params.k;
  p["beta"] = inst.params.beta;
  p["seed"] = inst.params.seed;
  j["params"] = p;
  j["planted"] = inst.planted ? to_json(*inst.planted) : Json(nullptr);
  if (inst.ground_truth_density) j["ground_truth_density"] = *inst.ground_truth_density;
  return j;
}

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

inline void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace dks
