#include "gitkit/json_io.hpp"

#include <fstream>

namespace gitkit {

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
  throw Error(ErrorCode::ParseError, what);
}

Mat parse_matrix(const Json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) parse_fail("matrix must be n rows");
  Mat m(n, n);
  for (int r = 0; r < n; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != n) parse_fail("matrix row size");
    for (int c = 0; c < n; ++c) {
      const Json& e = j[r][c];
      if (!e.is_array() || e.size() != 2) parse_fail("matrix entry must be [re, im]");
      m(r, c) = Cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

}  // namespace

GroupSpec parse_group_spec(const Json& j) {
  if (!j.is_object()) parse_fail("group spec must be an object");
  GroupSpec spec;
  std::string preset = j.value("preset", std::string("full_unitary"));
  if (preset == "full_unitary")
    spec.preset = Preset::full_unitary;
  else if (preset == "special_unitary")
    spec.preset = Preset::special_unitary;
  else if (preset == "torus")
    spec.preset = Preset::torus;
  else if (preset == "custom")
    spec.preset = Preset::custom;
  else
    parse_fail("unknown preset '" + preset + "'");

  if (!j.contains("n") || !j["n"].is_number_integer()) parse_fail("group spec needs integer n");
  spec.n = j["n"].get<int>();
  if (spec.n < 1) throw Error(ErrorCode::ValidationError, "n must be positive");

  if (spec.preset == Preset::torus) {
    if (!j.contains("weights")) parse_fail("torus preset needs weights");
    const Json& w = j["weights"];
    if (!w.is_array() || static_cast<int>(w.size()) != spec.n) parse_fail("weights must have n rows");
    int d = static_cast<int>(w[0].size());
    spec.weights.resize(spec.n, d);
    for (int r = 0; r < spec.n; ++r) {
      if (static_cast<int>(w[r].size()) != d) parse_fail("ragged weight rows");
      for (int c = 0; c < d; ++c) spec.weights(r, c) = w[r][c].get<int>();
    }
  }
  if (spec.preset == Preset::custom) {
    if (!j.contains("basis")) parse_fail("custom preset needs a basis");
    for (const Json& b : j["basis"]) spec.custom_basis.push_back(parse_matrix(b, spec.n));
  }
  return spec;
}

Instance parse_instance(const Json& j) {
  if (!j.is_object() || !j.contains("group")) parse_fail("instance needs a group");
  Instance inst{build_group(parse_group_spec(j["group"])), ProjectivePoint{}};
  double hbar = j.value("hbar", 1.0);
  if (!j.contains("vector")) parse_fail("instance needs a vector");
  const Json& jv = j["vector"];
  if (!jv.is_array() || static_cast<int>(jv.size()) != inst.group.n)
    parse_fail("vector length must match n");
  CVec v(inst.group.n);
  for (int k = 0; k < inst.group.n; ++k) {
    const Json& e = jv[k];
    if (!e.is_array() || e.size() != 2) parse_fail("vector entry must be [re, im]");
    v(k) = Cplx(e[0].get<double>(), e[1].get<double>());
  }
  inst.x = ProjectivePoint::make(v, hbar);
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
  return parse_instance(j);
}

const char* class_name(StabilityClass k) {
  switch (k) {
    case StabilityClass::unstable: return "unstable";
    case StabilityClass::semistable: return "semistable";
    case StabilityClass::polystable: return "polystable";
    case StabilityClass::stable: return "stable";
    case StabilityClass::undetermined: return "semistable_polystability_undetermined";
  }
  return "unknown";
}

Json verdict_to_json(const StabilityVerdict& v, const CompactGroup& group) {
  (void)group;
  Json j;
  j["class"] = class_name(v.klass);
  j["m"] = v.m_estimate;
  Json cert = Json::object();
  if (v.xi_unit) {
    Json coords = Json::array();
    for (int a = 0; a < v.xi_unit->coords.size(); ++a) coords.push_back(v.xi_unit->coords(a));
    cert["xi_unit"] = coords;
  }
  if (v.x_zero) {
    Json vec = Json::array();
    for (int k = 0; k < v.x_zero->v.size(); ++k)
      vec.push_back(Json::array({v.x_zero->v(k).real(), v.x_zero->v(k).imag()}));
    cert["x_zero"] = vec;
  }
  j["certificate"] = cert;
  j["sigma_min_isotropy"] = v.sigma_min_isotropy;
  j["diagnostics"] = v.diagnostics;
  return j;
}

Json polytope_to_json(const TorusVerdict& v) {
  Json j;
  Json verts = Json::array();
  for (const RVec& p : v.polytope.vertices) {
    Json row = Json::array();
    for (int a = 0; a < p.size(); ++a) row.push_back(p(a));
    verts.push_back(row);
  }
  j["vertices"] = verts;
  switch (v.polytope.contains_zero) {
    case ZeroLocation::outside: j["contains_zero"] = "outside"; break;
    case ZeroLocation::boundary: j["contains_zero"] = "boundary"; break;
    case ZeroLocation::relative_interior: j["contains_zero"] = "relative_interior"; break;
  }
  Json near = Json::array();
  for (int a = 0; a < v.eta_star.size(); ++a) near.push_back(v.eta_star(a));
  j["nearest"] = near;
  j["m"] = v.m;
  j["class"] = class_name(v.klass);
  return j;
}

}  // namespace gitkit
