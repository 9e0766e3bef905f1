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
#include "shadowsmith/mask_codec.h"

#include <algorithm>
#include <cmath>

namespace shadowsmith {

InstanceMask DecodeRle(const std::vector<uint32_t>& counts, int width,
                       int height) {
  const uint64_t total = static_cast<uint64_t>(width) * height;
  uint64_t sum = 0;
  for (uint32_t c : counts) sum += c;
  if (sum != total) {
    throw DecodeError("RLE counts sum to " + std::to_string(sum) +
                      ", expected " + std::to_string(total));
  }
  InstanceMask mask(width, height);
  uint64_t pos = 0;
  uint8_t value = 0;
  for (uint32_t run : counts) {
    if (value != 0) {
      for (uint64_t i = pos; i < pos + run; ++i) {
        const int x = static_cast<int>(i / height);
        const int y = static_cast<int>(i % height);
        mask.at(x, y) = 1;
      }
    }
    pos += run;
    value ^= 1;
  }
  return mask;
}

std::vector<uint32_t> EncodeRle(const InstanceMask& mask) {
  std::vector<uint32_t> counts;
  uint8_t current = 0;
  uint32_t run = 0;
  for (int x = 0; x < mask.width(); ++x) {
    for (int y = 0; y < mask.height(); ++y) {
      const uint8_t v = mask.at(x, y) != 0 ? 1 : 0;
      if (v != current) {
        counts.push_back(run);
        run = 0;
        current = v;
      }
      ++run;
    }
  }
  counts.push_back(run);
  return counts;
}

// Same scheme as pycocotools rleFrString/rleToString: 5 bits per char with
// a continuation bit, offset by 48, counts after the second stored as deltas.
std::vector<uint32_t> RleCountsFromString(std::string_view s) {
  std::vector<uint32_t> counts;
  size_t p = 0;
  while (p < s.size()) {
    int64_t x = 0;
    int k = 0;
    bool more = true;
    while (more) {
      if (p >= s.size()) throw DecodeError("truncated compressed RLE string");
      const int c = static_cast<int>(s[p]) - 48;
      if (c < 0 || c > 63) throw DecodeError("invalid compressed RLE string");
      x |= static_cast<int64_t>(c & 0x1f) << (5 * k);
      more = (c & 0x20) != 0;
      ++p;
      ++k;
      if (!more && (c & 0x10)) x |= -1LL << (5 * k);
    }
    if (counts.size() > 2) x += counts[counts.size() - 2];
    if (x < 0) throw DecodeError("negative run in compressed RLE string");
    counts.push_back(static_cast<uint32_t>(x));
  }
  return counts;
}

std::string RleCountsToString(const std::vector<uint32_t>& counts) {
  std::string s;
  for (size_t i = 0; i < counts.size(); ++i) {
    int64_t x = counts[i];
    if (i > 2) x -= static_cast<int64_t>(counts[i - 2]);
    bool more = true;
    while (more) {
      int c = static_cast<int>(x & 0x1f);
      x >>= 5;
      more = (c & 0x10) ? x != -1 : x != 0;
      if (more) c |= 0x20;
      s.push_back(static_cast<char>(c + 48));
    }
  }
  return s;
}

namespace {

bool OnSegment(double px, double py, double ax, double ay, double bx,
               double by) {
  const double cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax);
  if (cross != 0.0) return false;
  return px >= std::min(ax, bx) && px <= std::max(ax, bx) &&
         py >= std::min(ay, by) && py <= std::max(ay, by);
}

void FillPolygon(const std::vector<double>& flat, InstanceMask& mask) {
  if (flat.size() % 2 != 0) {
    throw DecodeError("polygon has an odd number of coordinates");
  }
  const size_t n = flat.size() / 2;
  if (n < 3) {
    throw DecodeError("polygon needs at least 3 vertices, got " +
                      std::to_string(n));
  }
  double min_x = flat[0], max_x = flat[0], min_y = flat[1], max_y = flat[1];
  for (size_t i = 0; i < n; ++i) {
    min_x = std::min(min_x, flat[2 * i]);
    max_x = std::max(max_x, flat[2 * i]);
    min_y = std::min(min_y, flat[2 * i + 1]);
    max_y = std::max(max_y, flat[2 * i + 1]);
  }
  // Only pixels whose centers fall in the vertex bounds can be inside.
  const int x0 = std::max(0, static_cast<int>(std::floor(min_x - 0.5)));
  const int x1 = std::min(mask.width() - 1, static_cast<int>(std::ceil(max_x)));
  const int y0 = std::max(0, static_cast<int>(std::floor(min_y - 0.5)));
  const int y1 = std::min(mask.height() - 1, static_cast<int>(std::ceil(max_y)));

  for (int y = y0; y <= y1; ++y) {
    const double py = y + 0.5;
    for (int x = x0; x <= x1; ++x) {
      const double px = x + 0.5;
      bool inside = false;
      bool boundary = false;
      for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const double ax = flat[2 * j], ay = flat[2 * j + 1];
        const double bx = flat[2 * i], by = flat[2 * i + 1];
        if (OnSegment(px, py, ax, ay, bx, by)) {
          boundary = true;
          break;
        }
        if ((ay > py) != (by > py)) {
          const double cx = ax + (py - ay) * (bx - ax) / (by - ay);
          if (px < cx) inside = !inside;
        }
      }
      if (boundary || inside) mask.at(x, y) = 1;
    }
  }
}

}  // namespace

InstanceMask DecodePolygons(const std::vector<std::vector<double>>& polygons,
                            int width, int height) {
  InstanceMask mask(width, height);
  for (const auto& poly : polygons) FillPolygon(poly, mask);
  return mask;
}

InstanceMask DecodeSegmentation(const nlohmann::json& segmentation, int width,
                                int height) {
  if (segmentation.is_array()) {
    std::vector<std::vector<double>> polygons;
    for (const auto& poly : segmentation) {
      if (!poly.is_array()) throw DecodeError("polygon must be a list");
      std::vector<double> flat;
      flat.reserve(poly.size());
      for (const auto& v : poly) {
        if (!v.is_number()) throw DecodeError("polygon coordinate not numeric");
        flat.push_back(v.get<double>());
      }
      polygons.push_back(std::move(flat));
    }
    if (polygons.empty()) throw DecodeError("empty polygon list");
    return DecodePolygons(polygons, width, height);
  }
  if (segmentation.is_object()) {
    if (segmentation.contains("size")) {
      const auto& size = segmentation.at("size");
      if (!size.is_array() || size.size() != 2 ||
          size[0].get<int>() != height || size[1].get<int>() != width) {
        throw DecodeError("RLE size does not match image dimensions");
      }
    }
    if (!segmentation.contains("counts")) {
      throw DecodeError("RLE segmentation without counts");
    }
    const auto& counts = segmentation.at("counts");
    std::vector<uint32_t> runs;
    if (counts.is_string()) {
      runs = RleCountsFromString(counts.get<std::string>());
    } else if (counts.is_array()) {
      for (const auto& c : counts) {
        if (!c.is_number_integer() || c.get<int64_t>() < 0) {
          throw DecodeError("RLE counts must be non-negative integers");
        }
        runs.push_back(c.get<uint32_t>());
      }
    } else {
      throw DecodeError("RLE counts must be a list or a string");
    }
    return DecodeRle(runs, width, height);
  }
  throw DecodeError("unsupported segmentation encoding");
}

}  // namespace shadowsmith
