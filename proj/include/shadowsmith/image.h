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
#ifndef SHADOWSMITH_IMAGE_H_
#define SHADOWSMITH_IMAGE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "shadowsmith/errors.h"

namespace shadowsmith {

// Row-major 2-D grid addressed as at(x, y) with x the column.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width < 0 || height < 0) throw ContractError("Grid: negative size");
    data_.assign(static_cast<size_t>(width) * height, fill);
  }
  Grid(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width < 0 || height < 0 ||
        data_.size() != static_cast<size_t>(width) * height) {
      throw ContractError("Grid: data length does not match width*height");
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& at(int x, int y) { return data_[Index(x, y)]; }
  const T& at(int x, int y) const { return data_[Index(x, y)]; }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }
  const std::vector<T>& values() const { return data_; }

  bool operator==(const Grid&) const = default;

 private:
  size_t Index(int x, int y) const {
    return static_cast<size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

// Intensity grid cut out of a raster (the sub-image inside a bounding box,
// a noise patch, ...).
using SubImage = Grid<uint16_t>;

// Binary grid, 1 = target pixel.
using BinaryGrid = Grid<uint8_t>;

// Full-image binary instance mask.
using InstanceMask = BinaryGrid;

// Single-channel intensity raster at 8 or 16 bits per sample.
class ImageRaster {
 public:
  ImageRaster() = default;
  ImageRaster(int width, int height, int depth, uint16_t fill = 0);
  ImageRaster(int width, int height, int depth, std::vector<uint16_t> data);

  int width() const { return pixels_.width(); }
  int height() const { return pixels_.height(); }
  int depth() const { return depth_; }
  uint32_t level_count() const { return 1u << depth_; }
  uint16_t max_level() const { return static_cast<uint16_t>(level_count() - 1); }

  uint16_t& at(int x, int y) { return pixels_.at(x, y); }
  uint16_t at(int x, int y) const { return pixels_.at(x, y); }

  std::span<uint16_t> data() { return pixels_.data(); }
  std::span<const uint16_t> data() const { return pixels_.data(); }
  const Grid<uint16_t>& pixels() const { return pixels_; }

  // Throws ValidationError when a value exceeds max_level().
  void CheckLevels() const;

  bool operator==(const ImageRaster&) const = default;

 private:
  int depth_ = 8;
  Grid<uint16_t> pixels_;
};

struct BoundingBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int64_t area() const { return static_cast<int64_t>(w) * h; }
  bool FitsIn(int width, int height) const {
    return w >= 1 && h >= 1 && x >= 0 && y >= 0 &&
           static_cast<int64_t>(x) + w <= width &&
           static_cast<int64_t>(y) + h <= height;
  }
  bool operator==(const BoundingBox&) const = default;
};

// Copies the raster values under bbox. Throws ContractError if the box does
// not fit the raster.
SubImage CropSubImage(const ImageRaster& raster, const BoundingBox& bbox);

BinaryGrid CropMask(const InstanceMask& mask, const BoundingBox& bbox);

}  // namespace shadowsmith

#endif  // SHADOWSMITH_IMAGE_H_
