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

#include "augforge/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "augforge/codec.hpp"
#include "augforge/error.hpp"
#include "json_util.hpp"

namespace augforge {

namespace fs = std::filesystem;
using detail::Json;

namespace {

constexpr std::size_t kMaxPixelViolationsPerImage = 8;

std::string frame_file(std::size_t index, const std::string& camera, const char* kind) {
  char prefix[16];
  std::snprintf(prefix, sizeof(prefix), "%06zu", index);
  return std::string(prefix) + "." + camera + "." + kind + ".png";
}

Json camera_to_json(const NamedCamera& cam) {
  return {{"name", cam.name},
          {"width", cam.width},
          {"height", cam.height},
          {"fx", cam.model.fx},
          {"fy", cam.model.fy},
          {"cx", cam.model.cx},
          {"cy", cam.model.cy},
          {"pose", detail::transform_to_json(cam.model.pose)}};
}

NamedCamera camera_from_json(const Json& j) {
  const std::string what = "camera";
  NamedCamera cam;
  cam.name = detail::get_as<std::string>(j, "name", what);
  cam.width = detail::get_as<int>(j, "width", what);
  cam.height = detail::get_as<int>(j, "height", what);
  cam.model.fx = detail::get_as<double>(j, "fx", what);
  cam.model.fy = detail::get_as<double>(j, "fy", what);
  cam.model.cx = detail::get_as<double>(j, "cx", what);
  cam.model.cy = detail::get_as<double>(j, "cy", what);
  cam.model.pose = detail::transform_from_json(detail::require(j, "pose", what), what);
  return cam;
}

void check_depth_values(const DepthMap& depth, const std::string& where,
                        std::vector<std::string>& out) {
  std::size_t bad = 0;
  for (int y = 0; y < depth.height(); ++y) {
    for (int x = 0; x < depth.width(); ++x) {
      const float d = depth.at(x, y);
      if (d == DepthMap::kInvalid || DepthMap::is_valid(d)) continue;
      if (bad < kMaxPixelViolationsPerImage) {
        std::ostringstream msg;
        msg << where << ": invalid depth value " << d << " at pixel (" << x << ", " << y << ")";
        out.push_back(msg.str());
      }
      ++bad;
    }
  }
  if (bad > kMaxPixelViolationsPerImage) {
    out.push_back(where + ": " + std::to_string(bad - kMaxPixelViolationsPerImage) +
                  " further invalid depth pixels");
  }
}

void check_mask(const std::optional<Mask>& mask, const std::string& label, const char* which,
                const NamedCamera* primary, std::vector<std::string>& out) {
  if (!mask) return;
  if (label.empty()) {
    out.push_back(std::string(which) + " mask present but " + which + " label is empty");
  }
  if (primary != nullptr &&
      (mask->width() != primary->width || mask->height() != primary->height)) {
    out.push_back(std::string(which) + " mask is " + std::to_string(mask->width()) + "x" +
                  std::to_string(mask->height()) + " but camera " + primary->name + " is " +
                  std::to_string(primary->width) + "x" + std::to_string(primary->height));
  }
}

}  // namespace

fs::path episode_dir(const fs::path& root, const std::string& id) {
  return root / "episodes" / id;
}

fs::path chain_path(const fs::path& root, const std::string& chain_ref) {
  return root / "chains" / (chain_ref + ".json");
}

std::vector<std::string> validate_episode_structure(const Episode& e) {
  std::vector<std::string> out;
  if (e.id.empty()) out.push_back("episode id is empty");
  if (e.frames.empty()) out.push_back("episode has no frames");
  if (e.cameras.empty()) out.push_back("episode declares no cameras");
  const NamedCamera* primary = nullptr;
  for (const NamedCamera& cam : e.cameras) {
    if (cam.name == e.primary_camera) primary = &cam;
    if (cam.width < 1 || cam.height < 1) {
      out.push_back("camera " + cam.name + " has non-positive dimensions");
    }
    try {
      cam.model.validate();
    } catch (const InvariantError& err) {
      out.push_back("camera " + cam.name + ": " + err.what());
    }
  }
  if (primary == nullptr) {
    out.push_back("primary camera '" + e.primary_camera + "' is not declared");
  }
  const std::size_t action_width = e.frames.empty() ? 0 : e.frames.front().action.size();
  for (std::size_t f = 0; f < e.frames.size(); ++f) {
    const Frame& frame = e.frames[f];
    const std::string where = "frame " + std::to_string(f);
    if (frame.views.size() != e.cameras.size()) {
      out.push_back(where + ": has " + std::to_string(frame.views.size()) + " views for " +
                    std::to_string(e.cameras.size()) + " cameras");
    }
    for (std::size_t c = 0; c < frame.views.size() && c < e.cameras.size(); ++c) {
      const CameraView& view = frame.views[c];
      const NamedCamera& cam = e.cameras[c];
      const std::string vwhere = where + " camera " + cam.name;
      if (view.camera != cam.name) {
        out.push_back(vwhere + ": view is labelled '" + view.camera + "'");
      }
      if (view.rgb.width() != cam.width || view.rgb.height() != cam.height) {
        out.push_back(vwhere + ": image is " + std::to_string(view.rgb.width()) + "x" +
                      std::to_string(view.rgb.height()) + ", camera declares " +
                      std::to_string(cam.width) + "x" + std::to_string(cam.height));
      }
      if (view.depth) {
        if (!same_dims(*view.depth, view.rgb)) {
          out.push_back(vwhere + ": depth dimensions differ from the image");
        }
        check_depth_values(*view.depth, vwhere, out);
      }
    }
    if (frame.action.size() != action_width) {
      out.push_back(where + ": action width " + std::to_string(frame.action.size()) +
                    " differs from frame 0 width " + std::to_string(action_width));
    }
    if (!(frame.gripper >= 0.0 && frame.gripper <= 1.0)) {
      out.push_back(where + ": gripper value outside [0, 1]");
    }
    for (std::size_t j = 0; j < frame.joints.size(); ++j) {
      if (!std::isfinite(frame.joints[j])) {
        out.push_back(where + ": joint " + std::to_string(j) + " is not finite");
      }
    }
  }
  check_mask(e.object_mask, e.object_label, "object", primary, out);
  check_mask(e.receptacle_mask, e.receptacle_label, "receptacle", primary, out);
  return out;
}

std::vector<std::string> validate_episode(const Episode& e, const KinematicChain& chain) {
  std::vector<std::string> out = validate_episode_structure(e);
  for (std::size_t f = 0; f < e.frames.size(); ++f) {
    if (e.frames[f].joints.size() != chain.dof()) {
      out.push_back("frame " + std::to_string(f) + ": " +
                    std::to_string(e.frames[f].joints.size()) + " joint values for the " +
                    std::to_string(chain.dof()) + "-joint chain " + chain.name);
    }
  }
  return out;
}

Episode load_episode(const fs::path& root, const std::string& id) {
  const fs::path dir = episode_dir(root, id);
  const fs::path meta_path = dir / "meta.json";
  if (!fs::exists(meta_path)) throw IoError("missing file " + meta_path.string());
  const Json meta = detail::parse_json(detail::read_text_file(meta_path), meta_path.string());
  const std::string what = meta_path.string();
  const int version = detail::get_as<int>(meta, "schema_version", what);
  if (version != kSchemaVersion) {
    throw FormatError(what + ": unknown schema version " + std::to_string(version));
  }

  Episode e;
  e.id = detail::get_as<std::string>(meta, "id", what);
  if (e.id != id) throw FormatError(what + ": id '" + e.id + "' does not match directory");
  e.task_text = detail::get_or<std::string>(meta, "task_text", "");
  e.object_label = detail::get_or<std::string>(meta, "object_label", "");
  e.receptacle_label = detail::get_or<std::string>(meta, "receptacle_label", "");
  e.chain_ref = detail::get_or<std::string>(meta, "chain_ref", "");
  e.primary_camera = detail::get_as<std::string>(meta, "primary_camera", what);
  for (const Json& cam : detail::require(meta, "cameras", what)) {
    e.cameras.push_back(camera_from_json(cam));
  }

  const Json& frames = detail::require(meta, "frames", what);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const std::string fwhat = what + " frame " + std::to_string(f);
    Frame frame;
    frame.joints = detail::get_as<std::vector<double>>(frames[f], "joints", fwhat);
    frame.gripper = detail::get_as<double>(frames[f], "gripper", fwhat);
    frame.action = detail::get_as<std::vector<double>>(frames[f], "action", fwhat);
    for (const NamedCamera& cam : e.cameras) {
      CameraView view;
      view.camera = cam.name;
      const fs::path rgb_path = dir / "frames" / frame_file(f, cam.name, "rgb");
      if (!fs::exists(rgb_path)) throw IoError("missing file " + rgb_path.string());
      try {
        view.rgb = decode_rgb_png(detail::read_binary_file(rgb_path));
      } catch (const FormatError& err) {
        throw FormatError(rgb_path.string() + ": " + err.what());
      }
      if (view.rgb.width() != cam.width || view.rgb.height() != cam.height) {
        throw DimensionError(rgb_path.string() + ": image is " +
                             std::to_string(view.rgb.width()) + "x" +
                             std::to_string(view.rgb.height()) + ", camera declares " +
                             std::to_string(cam.width) + "x" + std::to_string(cam.height));
      }
      const fs::path depth_path = dir / "frames" / frame_file(f, cam.name, "depth");
      if (fs::exists(depth_path)) {
        try {
          view.depth = decode_depth_png(detail::read_binary_file(depth_path));
        } catch (const FormatError& err) {
          throw FormatError(depth_path.string() + ": " + err.what());
        }
        require_same_dims(*view.depth, view.rgb, depth_path.string().c_str());
      }
      frame.views.push_back(std::move(view));
    }
    e.frames.push_back(std::move(frame));
  }

  const NamedCamera& primary = e.camera(e.primary_camera);
  auto load_mask = [&](const char* which) -> std::optional<Mask> {
    const fs::path p = dir / "masks" / (std::string("000000.") + which + ".png");
    if (!fs::exists(p)) return std::nullopt;
    Mask m;
    try {
      m = decode_mask_png(detail::read_binary_file(p));
    } catch (const FormatError& err) {
      throw FormatError(p.string() + ": " + err.what());
    }
    if (m.width() != primary.width || m.height() != primary.height) {
      throw DimensionError(p.string() + ": mask is " + std::to_string(m.width()) + "x" +
                           std::to_string(m.height()) + ", image is " +
                           std::to_string(primary.width) + "x" + std::to_string(primary.height));
    }
    return m;
  };
  e.object_mask = load_mask("object");
  e.receptacle_mask = load_mask("receptacle");
  return e;
}

EpisodeSummary summarize_episode(const fs::path& root, const std::string& id) {
  const fs::path dir = episode_dir(root, id);
  const fs::path meta_path = dir / "meta.json";
  if (!fs::exists(meta_path)) throw IoError("missing file " + meta_path.string());
  const Json meta = detail::parse_json(detail::read_text_file(meta_path), meta_path.string());
  EpisodeSummary s;
  s.id = detail::get_as<std::string>(meta, "id", meta_path.string());
  s.frame_count = detail::require(meta, "frames", meta_path.string()).size();
  s.task_text = detail::get_or<std::string>(meta, "task_text", "");
  s.object_label = detail::get_or<std::string>(meta, "object_label", "");
  s.receptacle_label = detail::get_or<std::string>(meta, "receptacle_label", "");
  auto coverage = [&](const char* which) -> std::optional<double> {
    const fs::path p = dir / "masks" / (std::string("000000.") + which + ".png");
    if (!fs::exists(p)) return std::nullopt;
    const Mask m = decode_mask_png(detail::read_binary_file(p));
    if (m.pixel_count() == 0) return 0.0;
    return static_cast<double>(m.count()) / static_cast<double>(m.pixel_count());
  };
  s.object_coverage = coverage("object");
  s.receptacle_coverage = coverage("receptacle");
  return s;
}

void save_episode(const fs::path& root, const Episode& e) {
  const auto violations = validate_episode_structure(e);
  if (!violations.empty()) {
    throw InvariantError("episode '" + e.id + "' is invalid: " + violations.front());
  }
  // Encode everything before touching the filesystem.
  Json meta;
  meta["schema_version"] = kSchemaVersion;
  meta["id"] = e.id;
  meta["task_text"] = e.task_text;
  meta["object_label"] = e.object_label;
  meta["receptacle_label"] = e.receptacle_label;
  meta["chain_ref"] = e.chain_ref;
  meta["primary_camera"] = e.primary_camera;
  Json cams = Json::array();
  for (const NamedCamera& cam : e.cameras) cams.push_back(camera_to_json(cam));
  meta["cameras"] = cams;
  Json frames = Json::array();
  std::vector<std::pair<std::string, Bytes>> files;
  for (std::size_t f = 0; f < e.frames.size(); ++f) {
    const Frame& frame = e.frames[f];
    frames.push_back({{"joints", frame.joints}, {"gripper", frame.gripper}, {"action", frame.action}});
    for (const CameraView& view : frame.views) {
      files.emplace_back("frames/" + frame_file(f, view.camera, "rgb"), encode_rgb_png(view.rgb));
      if (view.depth) {
        files.emplace_back("frames/" + frame_file(f, view.camera, "depth"),
                           encode_depth_png(*view.depth));
      }
    }
  }
  meta["frames"] = frames;
  if (e.object_mask) files.emplace_back("masks/000000.object.png", encode_mask_png(*e.object_mask));
  if (e.receptacle_mask) {
    files.emplace_back("masks/000000.receptacle.png", encode_mask_png(*e.receptacle_mask));
  }

  const fs::path dir = episode_dir(root, e.id);
  const fs::path staging = dir.string() + ".partial";
  std::error_code ec;
  fs::remove_all(staging, ec);
  fs::create_directories(staging / "frames", ec);
  fs::create_directories(staging / "masks", ec);
  if (ec) throw IoError("cannot create " + staging.string() + ": " + ec.message());
  detail::write_text_file(staging / "meta.json", detail::dump_json(meta));
  for (const auto& [rel, bytes] : files) detail::write_binary_file(staging / rel, bytes);
  fs::remove_all(dir, ec);
  fs::rename(staging, dir, ec);
  if (ec) throw IoError("cannot move " + staging.string() + " into place: " + ec.message());
}

MeshAsset parse_obj(const std::string& text, const std::string& name) {
  MeshAsset mesh;
  mesh.name = name;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::size_t face_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      double x = 0;
      double y = 0;
      double z = 0;
      if (!(ls >> x >> y >> z)) {
        throw FormatError(name + ":" + std::to_string(line_no) + ": malformed vertex");
      }
      mesh.vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<long> idx;
      std::string tok;
      while (ls >> tok) {
        const auto slash = tok.find('/');
        try {
          idx.push_back(std::stol(tok.substr(0, slash)));
        } catch (const std::exception&) {
          throw FormatError(name + ":" + std::to_string(line_no) + ": malformed face index '" +
                            tok + "'");
        }
      }
      if (idx.size() != 3) {
        throw FormatError(name + ": face " + std::to_string(face_no) + " (line " +
                          std::to_string(line_no) + ") has " + std::to_string(idx.size()) +
                          " vertices; only triangles are supported");
      }
      std::array<std::uint32_t, 3> tri{};
      for (int k = 0; k < 3; ++k) {
        if (idx[k] < 1) {
          throw FormatError(name + ": face " + std::to_string(face_no) +
                            " uses a non-positive vertex index");
        }
        tri[k] = static_cast<std::uint32_t>(idx[k] - 1);
      }
      mesh.triangles.push_back(tri);
      ++face_no;
    }
  }
  try {
    mesh.validate();
  } catch (const InvariantError& err) {
    throw FormatError(err.what());
  }
  return mesh;
}

MeshCatalog load_mesh_catalog(const fs::path& catalog_json) {
  const Json index =
      detail::parse_json(detail::read_text_file(catalog_json), catalog_json.string());
  if (!index.is_array()) throw FormatError(catalog_json.string() + ": expected a JSON array");
  if (index.empty()) throw FormatError(catalog_json.string() + ": catalog is empty");
  MeshCatalog catalog;
  const fs::path dir = catalog_json.parent_path();
  for (std::size_t i = 0; i < index.size(); ++i) {
    const std::string what = catalog_json.string() + " entry " + std::to_string(i);
    const auto file = detail::get_as<std::string>(index[i], "file", what);
    MeshAsset asset = parse_obj(detail::read_text_file(dir / file), file);
    asset.category = detail::get_as<std::string>(index[i], "category", what);
    asset.prompt_noun = detail::get_as<std::string>(index[i], "prompt_noun", what);
    for (const auto& tag : detail::get_as<std::vector<std::string>>(index[i], "role_tags", what)) {
      auto parsed = role_tag_from_string(tag);
      if (!parsed) throw FormatError(what + ": unknown role tag '" + tag + "'");
      asset.role_tags.push_back(*parsed);
    }
    catalog.assets.push_back(std::move(asset));
  }
  return catalog;
}

}  // namespace augforge
