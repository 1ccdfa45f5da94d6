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

#include "json_util.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

namespace augforge::detail {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_binary_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  write_binary_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(what + ": invalid JSON (" + e.what() + ")");
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

const Json& require(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object()) throw FormatError(what + ": expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(what + ": missing field '" + key + "'");
  return *it;
}

Vec3 vec3_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw FormatError(what + ": expected 3 numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Json vec3_to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

RigidTransform transform_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 16) {
    throw FormatError(what + ": expected a row-major 4x4 matrix (16 numbers)");
  }
  std::array<double, 16> m{};
  for (int i = 0; i < 16; ++i) m[i] = j[i].get<double>();
  return RigidTransform::from_row_major(m);
}

Json transform_to_json(const RigidTransform& t) {
  Json out = Json::array();
  for (double v : t.to_row_major()) out.push_back(v);
  return out;
}

}  // namespace augforge::detail
