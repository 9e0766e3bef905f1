/**
 * Copyright 2026 The Shadowsmith Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef SHADOWSMITH_MASK_CODEC_H_
#define SHADOWSMITH_MASK_CODEC_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "shadowsmith/image.h"

namespace shadowsmith {

// COCO run-length encoding. Runs alternate zeros/ones starting with zeros,
// over pixels in column-major order. Throws DecodeError when the counts do
// not sum to width*height.
InstanceMask DecodeRle(const std::vector<uint32_t>& counts, int width,
                       int height);
std::vector<uint32_t> EncodeRle(const InstanceMask& mask);

// COCO compressed RLE string (the LEB128-like ASCII form used by pycocotools).
std::vector<uint32_t> RleCountsFromString(std::string_view s);
std::string RleCountsToString(const std::vector<uint32_t>& counts);

// Fills each polygon (flat x0,y0,x1,y1,... list) with the even-odd rule,
// testing pixel centers (x+0.5, y+0.5). Centers lying exactly on an edge are
// inside. Multiple polygons are OR-ed. Throws DecodeError for polygons with
// fewer than 3 vertices.
InstanceMask DecodePolygons(const std::vector<std::vector<double>>& polygons,
                            int width, int height);

// Dispatches on a COCO "segmentation" value: a list of polygons, or an
// object {"size": [h, w], "counts": [...] | "..."}.
InstanceMask DecodeSegmentation(const nlohmann::json& segmentation, int width,
                                int height);

}  // namespace shadowsmith

#endif  // SHADOWSMITH_MASK_CODEC_H_
