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
#include "shadowsmith/image.h"

#include <string>

namespace shadowsmith {
namespace {

void CheckDepth(int depth) {
  if (depth != 8 && depth != 16) {
    throw ContractError("ImageRaster: depth must be 8 or 16, got " +
                        std::to_string(depth));
  }
}

}  // namespace

ImageRaster::ImageRaster(int width, int height, int depth, uint16_t fill)
    : depth_(depth), pixels_(width, height, fill) {
  CheckDepth(depth);
  CheckLevels();
}

ImageRaster::ImageRaster(int width, int height, int depth,
                         std::vector<uint16_t> data)
    : depth_(depth), pixels_(width, height, std::move(data)) {
  CheckDepth(depth);
  CheckLevels();
}

void ImageRaster::CheckLevels() const {
  const uint16_t top = max_level();
  for (uint16_t v : pixels_.data()) {
    if (v > top) {
      throw ValidationError("ImageRaster: value " + std::to_string(v) +
                            " exceeds the maximum level for depth " +
                            std::to_string(depth_));
    }
  }
}

SubImage CropSubImage(const ImageRaster& raster, const BoundingBox& bbox) {
  if (!bbox.FitsIn(raster.width(), raster.height())) {
    throw ContractError("CropSubImage: bounding box outside raster");
  }
  SubImage out(bbox.w, bbox.h);
  for (int y = 0; y < bbox.h; ++y) {
    for (int x = 0; x < bbox.w; ++x) out.at(x, y) = raster.at(bbox.x + x, bbox.y + y);
  }
  return out;
}

BinaryGrid CropMask(const InstanceMask& mask, const BoundingBox& bbox) {
  if (!bbox.FitsIn(mask.width(), mask.height())) {
    throw ContractError("CropMask: bounding box outside mask");
  }
  BinaryGrid out(bbox.w, bbox.h);
  for (int y = 0; y < bbox.h; ++y) {
    for (int x = 0; x < bbox.w; ++x) out.at(x, y) = mask.at(bbox.x + x, bbox.y + y);
  }
  return out;
}

}  // namespace shadowsmith
