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

// JSON bodies of the backend HTTP protocol:
//
//   POST /v1/inpaint  {image, mask, depth?, prompt, seed, mode} -> {image}
//   POST /v1/segment  {image, point?: {x, y}}                   -> {masks, scores}
//   POST /v1/track    {prev_image, next_image, prev_mask}       -> {mask, fallback?}
//   GET  /v1/health                                             -> {name, version, modes}
//   errors                                                      -> {error}
//
// Image fields are base64 PNG: RGB 8-bit for images, 8-bit gray (255 =
// member) for masks, 16-bit gray millimetres for depth. Encoders emit compact
// JSON with sorted keys; decoders ignore unknown fields.

#ifndef AUGFORGE_WIRE_HPP_
#define AUGFORGE_WIRE_HPP_

#include <string>
#include <vector>

#include "augforge/backend.hpp"

namespace augforge::wire {

inline constexpr const char* kInpaintPath = "/v1/inpaint";
inline constexpr const char* kSegmentPath = "/v1/segment";
inline constexpr const char* kTrackPath = "/v1/track";
inline constexpr const char* kHealthPath = "/v1/health";

std::string encode_inpaint_request(const InpaintRequest& req);
InpaintRequest decode_inpaint_request(const std::string& body);
std::string encode_inpaint_reply(const Image& image);
Image decode_inpaint_reply(const std::string& body);

std::string encode_segment_request(const SegmentRequest& req);
SegmentRequest decode_segment_request(const std::string& body);
std::string encode_segment_reply(const std::vector<ScoredMask>& masks);
std::vector<ScoredMask> decode_segment_reply(const std::string& body);

std::string encode_track_request(const TrackRequest& req);
TrackRequest decode_track_request(const std::string& body);
std::string encode_track_reply(const TrackResult& result);
TrackResult decode_track_reply(const std::string& body);

std::string encode_health(const BackendInfo& info);
BackendInfo decode_health(const std::string& body);

std::string encode_error(const std::string& message);
// Best effort: the error message of an error body, or the raw body.
std::string decode_error(const std::string& body);

}  // namespace augforge::wire

#endif  // AUGFORGE_WIRE_HPP_
