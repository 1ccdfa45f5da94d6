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

// Private helpers shared by the JSON readers and writers.

#ifndef AUGFORGE_SRC_JSON_UTIL_HPP_
#define AUGFORGE_SRC_JSON_UTIL_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "augforge/error.hpp"
#include "augforge/transform.hpp"
#include "json.hpp"

namespace augforge::detail {

using Json = nlohmann::json;

std::string read_text_file(const std::filesystem::path& path);
std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path);
void write_binary_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_file(const std::filesystem::path& path, const std::string& text);

Json parse_json(const std::string& text, const std::string& what);
// Indented, key-sorted, trailing newline: stable bytes for identical values.
std::string dump_json(const Json& j);

// Field access that reports the missing/mistyped key by name.
const Json& require(const Json& j, const char* key, const std::string& what);

template <typename T>
T get_as(const Json& j, const char* key, const std::string& what) {
  const Json& v = require(j, key, what);
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(what + ": field '" + key + "' has the wrong type (" + e.what() + ")");
  }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("field '") + key + "' has the wrong type (" + e.what() + ")");
  }
}

Vec3 vec3_from_json(const Json& j, const std::string& what);
Json vec3_to_json(const Vec3& v);
RigidTransform transform_from_json(const Json& j, const std::string& what);
Json transform_to_json(const RigidTransform& t);

}  // namespace augforge::detail

#endif  // AUGFORGE_SRC_JSON_UTIL_HPP_
