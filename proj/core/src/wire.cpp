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

#include "augforge/wire.hpp"

#include "augforge/codec.hpp"
#include "augforge/error.hpp"
#include "json_util.hpp"

namespace augforge::wire {

using detail::Json;

namespace {

std::string b64(const Bytes& bytes) { return base64_encode(bytes); }

Bytes unb64(const Json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_string()) {
    throw FormatError(std::string("field '") + field + "' is missing or not a string");
  }
  try {
    return base64_decode(it->get_ref<const std::string&>());
  } catch (const FormatError& e) {
    throw FormatError(std::string("field '") + field + "': " + e.what());
  }
}

Image image_field(const Json& j, const char* field) {
  try {
    return decode_rgb_png(unb64(j, field));
  } catch (const FormatError& e) {
    throw FormatError(std::string("field '") + field + "': " + e.what());
  }
}

Mask mask_field(const Json& j, const char* field) {
  try {
    return decode_mask_png(unb64(j, field));
  } catch (const FormatError& e) {
    throw FormatError(std::string("field '") + field + "': " + e.what());
  }
}

Json parse(const std::string& body) { return detail::parse_json(body, "wire body"); }

std::string dump(const Json& j) { return j.dump(); }

}  // namespace

std::string encode_inpaint_request(const InpaintRequest& req) {
  Json j{{"image", b64(encode_rgb_png(req.image))},
         {"mask", b64(encode_mask_png(req.mask))},
         {"prompt", req.prompt},
         {"seed", req.seed},
         {"mode", to_string(req.mode)}};
  if (req.depth) j["depth"] = b64(encode_depth_png(*req.depth));
  return dump(j);
}

InpaintRequest decode_inpaint_request(const std::string& body) {
  const Json j = parse(body);
  InpaintRequest req;
  req.image = image_field(j, "image");
  req.mask = mask_field(j, "mask");
  if (auto it = j.find("depth"); it != j.end() && !it->is_null()) {
    try {
      req.depth = decode_depth_png(unb64(j, "depth"));
    } catch (const FormatError& e) {
      throw FormatError(std::string("field 'depth': ") + e.what());
    }
  }
  req.prompt = detail::get_as<std::string>(j, "prompt", "inpaint request");
  req.seed = detail::get_as<std::uint64_t>(j, "seed", "inpaint request");
  const auto mode = detail::get_as<std::string>(j, "mode", "inpaint request");
  auto parsed = inpaint_mode_from_string(mode);
  if (!parsed) throw FormatError("field 'mode': unknown mode '" + mode + "'");
  req.mode = *parsed;
  return req;
}

std::string encode_inpaint_reply(const Image& image) {
  return dump(Json{{"image", b64(encode_rgb_png(image))}});
}

Image decode_inpaint_reply(const std::string& body) { return image_field(parse(body), "image"); }

std::string encode_segment_request(const SegmentRequest& req) {
  Json j{{"image", b64(encode_rgb_png(req.image))}};
  if (req.point) j["point"] = {{"x", req.point->x}, {"y", req.point->y}};
  return dump(j);
}

SegmentRequest decode_segment_request(const std::string& body) {
  const Json j = parse(body);
  SegmentRequest req;
  req.image = image_field(j, "image");
  if (auto it = j.find("point"); it != j.end() && !it->is_null()) {
    req.point = PixelCoord{detail::get_as<int>(*it, "x", "point"),
                           detail::get_as<int>(*it, "y", "point")};
  }
  return req;
}

std::string encode_segment_reply(const std::vector<ScoredMask>& masks) {
  Json m = Json::array();
  Json s = Json::array();
  for (const ScoredMask& sm : masks) {
    m.push_back(b64(encode_mask_png(sm.mask)));
    s.push_back(sm.score);
  }
  return dump(Json{{"masks", m}, {"scores", s}});
}

std::vector<ScoredMask> decode_segment_reply(const std::string& body) {
  const Json j = parse(body);
  const Json& masks = detail::require(j, "masks", "segment reply");
  const Json& scores = detail::require(j, "scores", "segment reply");
  if (!masks.is_array() || !scores.is_array() || masks.size() != scores.size()) {
    throw FormatError("segment reply: masks and scores must be arrays of equal length");
  }
  std::vector<ScoredMask> out;
  for (std::size_t i = 0; i < masks.size(); ++i) {
    Json holder{{"mask", masks[i]}};
    out.push_back({mask_field(holder, "mask"), scores[i].get<double>()});
  }
  return out;
}

std::string encode_track_request(const TrackRequest& req) {
  return dump(Json{{"prev_image", b64(encode_rgb_png(req.prev_image))},
                   {"next_image", b64(encode_rgb_png(req.next_image))},
                   {"prev_mask", b64(encode_mask_png(req.prev_mask))}});
}

TrackRequest decode_track_request(const std::string& body) {
  const Json j = parse(body);
  return {image_field(j, "prev_image"), image_field(j, "next_image"), mask_field(j, "prev_mask")};
}

std::string encode_track_reply(const TrackResult& result) {
  Json j{{"mask", b64(encode_mask_png(result.mask))}};
  if (result.fallback) j["fallback"] = true;
  return dump(j);
}

TrackResult decode_track_reply(const std::string& body) {
  const Json j = parse(body);
  return {mask_field(j, "mask"), detail::get_or<bool>(j, "fallback", false)};
}

std::string encode_health(const BackendInfo& info) {
  return dump(Json{{"name", info.name}, {"version", info.version}, {"modes", info.modes}});
}

BackendInfo decode_health(const std::string& body) {
  const Json j = parse(body);
  return {detail::get_as<std::string>(j, "name", "health"),
          detail::get_as<std::string>(j, "version", "health"),
          detail::get_or<std::vector<std::string>>(j, "modes", {})};
}

std::string encode_error(const std::string& message) { return dump(Json{{"error", message}}); }

std::string decode_error(const std::string& body) {
  try {
    const Json j = Json::parse(body);
    if (auto it = j.find("error"); it != j.end() && it->is_string()) return it->get<std::string>();
  } catch (const nlohmann::json::exception&) {
  }
  return body;
}

}  // namespace augforge::wire
