// Copyright 2026 The augforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "augforge/error.hpp"
#include "augforge/kinematics.hpp"
#include "json_util.hpp"

namespace augforge {

using detail::Json;

KinematicChain parse_chain_json(const std::string& text) {
  const Json root = detail::parse_json(text, "chain");
  KinematicChain chain;
  chain.name = detail::get_or<std::string>(root, "name", "");
  const Json& joints = detail::require(root, "joints", "chain");
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const std::string what = "chain joint " + std::to_string(i);
    const Json& rec = joints[i];
    Joint j;
    j.parent_to_joint = detail::transform_from_json(detail::require(rec, "transform", what), what);
    j.axis = detail::vec3_from_json(detail::require(rec, "axis", what), what);
    const auto kind = detail::get_as<std::string>(rec, "kind", what);
    if (kind == "revolute") {
      j.kind = JointKind::kRevolute;
    } else if (kind == "prismatic") {
      j.kind = JointKind::kPrismatic;
    } else {
      throw FormatError(what + ": unknown kind '" + kind + "'");
    }
    const auto limits = detail::get_as<std::vector<double>>(rec, "limits", what);
    if (limits.size() != 2) throw FormatError(what + ": limits must be [lo, hi]");
    j.lower = limits[0];
    j.upper = limits[1];
    chain.joints.push_back(j);
  }
  if (auto it = root.find("end_effector_offset"); it != root.end()) {
    chain.end_effector_offset = detail::transform_from_json(*it, "end_effector_offset");
  }
  if (auto it = root.find("links"); it != root.end()) {
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string what = "chain link " + std::to_string(i);
      const Json& rec = (*it)[i];
      LinkPrimitive link;
      link.joint = detail::get_as<int>(rec, "joint", what);
      const auto type = detail::get_as<std::string>(rec, "type", what);
      if (type == "capsule") {
        Capsule c;
        c.radius = detail::get_as<double>(rec, "radius", what);
        c.a = detail::vec3_from_json(detail::require(rec, "a", what), what);
        c.b = detail::vec3_from_json(detail::require(rec, "b", what), what);
        link.shape = c;
      } else if (type == "box") {
        Box b;
        b.half_extents = detail::vec3_from_json(detail::require(rec, "half_extents", what), what);
        if (auto p = rec.find("pose"); p != rec.end()) {
          b.pose = detail::transform_from_json(*p, what);
        }
        link.shape = b;
      } else {
        throw FormatError(what + ": unknown type '" + type + "'");
      }
      chain.links.push_back(link);
    }
  }
  chain.validate();
  return chain;
}

std::string chain_to_json(const KinematicChain& chain) {
  Json root;
  root["name"] = chain.name;
  Json joints = Json::array();
  for (const Joint& j : chain.joints) {
    joints.push_back({{"transform", detail::transform_to_json(j.parent_to_joint)},
                      {"axis", detail::vec3_to_json(j.axis)},
                      {"kind", j.kind == JointKind::kRevolute ? "revolute" : "prismatic"},
                      {"limits", {j.lower, j.upper}}});
  }
  root["joints"] = joints;
  root["end_effector_offset"] = detail::transform_to_json(chain.end_effector_offset);
  Json links = Json::array();
  for (const LinkPrimitive& link : chain.links) {
    Json rec;
    rec["joint"] = link.joint;
    if (const auto* c = std::get_if<Capsule>(&link.shape)) {
      rec["type"] = "capsule";
      rec["radius"] = c->radius;
      rec["a"] = detail::vec3_to_json(c->a);
      rec["b"] = detail::vec3_to_json(c->b);
    } else {
      const auto& b = std::get<Box>(link.shape);
      rec["type"] = "box";
      rec["half_extents"] = detail::vec3_to_json(b.half_extents);
      rec["pose"] = detail::transform_to_json(b.pose);
    }
    links.push_back(rec);
  }
  root["links"] = links;
  return detail::dump_json(root);
}

KinematicChain load_chain(const std::filesystem::path& path) {
  try {
    return parse_chain_json(detail::read_text_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_chain(const std::filesystem::path& path, const KinematicChain& chain) {
  detail::write_text_file(path, chain_to_json(chain));
}

}  // namespace augforge
