#pragma once

#include <string>

#include <json.hpp>

#include "gitkit/stability.hpp"

namespace gitkit {

using Json = nlohmann::ordered_json;

/// Group spec: {"preset": str, "n": int, "weights": [[int,..],..],
/// "basis": [[[ [re,im], .. ], .. ], ..]}.
GroupSpec parse_group_spec(const Json& j);

struct Instance {
  CompactGroup group;
  ProjectivePoint x;
};

/// Instance: {"group": <group spec>, "hbar": real, "vector": [[re,im],..]}.
Instance parse_instance(const Json& j);
Instance load_instance(const std::string& path);

Json verdict_to_json(const StabilityVerdict& v, const CompactGroup& group);
Json polytope_to_json(const TorusVerdict& v);

const char* class_name(StabilityClass k);

}  // namespace gitkit
