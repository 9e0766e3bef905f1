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
#include "shadowsmith/rect_sampler.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace shadowsmith {

void ValidateRange(const Range& r, const char* name) {
  if (!(r.lo > 0.0) || !(r.lo <= r.hi) || !std::isfinite(r.hi)) {
    throw ConfigError(std::string(name) + " range must satisfy 0 < lo <= hi, got [" +
                      std::to_string(r.lo) + ", " + std::to_string(r.hi) + "]");
  }
}

AugmentParams SampleParams(Rng& rng, const Range& area_range,
                           const Range& aspect_range) {
  ValidateRange(area_range, "area ratio");
  ValidateRange(aspect_range, "aspect ratio");
  AugmentParams p;
  p.area_ratio = rng.Uniform(area_range.lo, area_range.hi);
  p.aspect_ratio = rng.Uniform(aspect_range.lo, aspect_range.hi);
  return p;
}

RectDims ComputeRectDims(const BoundingBox& bbox, const AugmentParams& params) {
  RectDims d;
  const double area = params.area_ratio * static_cast<double>(bbox.w) * bbox.h;
  d.exact_w = std::sqrt(area / params.aspect_ratio);
  d.exact_h = params.aspect_ratio * d.exact_w;
  d.w = std::max(1, static_cast<int>(std::lround(d.exact_w)));
  d.h = std::max(1, static_cast<int>(std::lround(d.exact_h)));
  d.feasible = d.w <= bbox.w && d.h <= bbox.h;
  return d;
}

Rect PlaceRect(Rng& rng, const BoundingBox& bbox, int w, int h,
               Edge* chosen_edge) {
  if (w < 1 || h < 1 || w > bbox.w || h > bbox.h) {
    throw ContractError("PlaceRect: rect " + std::to_string(w) + "x" +
                        std::to_string(h) + " does not fit box " +
                        std::to_string(bbox.w) + "x" + std::to_string(bbox.h));
  }
  const auto edge = static_cast<Edge>(rng.UniformInt(0, 3));
  Rect r{0, 0, w, h};
  switch (edge) {
    case Edge::kLeft:
      r.x = 0;
      r.y = static_cast<int>(rng.UniformInt(0, bbox.h - h));
      break;
    case Edge::kTop:
      r.y = 0;
      r.x = static_cast<int>(rng.UniformInt(0, bbox.w - w));
      break;
    case Edge::kRight:
      r.x = bbox.w - w;
      r.y = static_cast<int>(rng.UniformInt(0, bbox.h - h));
      break;
    case Edge::kBottom:
      r.y = bbox.h - h;
      r.x = static_cast<int>(rng.UniformInt(0, bbox.w - w));
      break;
  }
  if (chosen_edge != nullptr) *chosen_edge = edge;
  return r;
}

SampledRect SampleRect(Rng& rng, const BoundingBox& bbox,
                       const Range& area_range, const Range& aspect_range,
                       int max_retries) {
  SampledRect out;
  const int attempts = 1 + std::max(0, max_retries);
  for (int i = 0; i < attempts; ++i) {
    out.params = SampleParams(rng, area_range, aspect_range);
    out.dims = ComputeRectDims(bbox, out.params);
    out.attempts = i + 1;
    if (out.dims.feasible) {
      out.rect = PlaceRect(rng, bbox, out.dims.w, out.dims.h, &out.edge);
      return out;
    }
  }
  out.clamped = true;
  out.rect = PlaceRect(rng, bbox, std::min(out.dims.w, bbox.w),
                       std::min(out.dims.h, bbox.h), &out.edge);
  return out;
}

bool IsFlushAndContained(const Rect& r, int box_w, int box_h) {
  const bool inside = r.x >= 0 && r.y >= 0 && r.w >= 1 && r.h >= 1 &&
                      r.x + r.w <= box_w && r.y + r.h <= box_h;
  const bool flush =
      r.x == 0 || r.y == 0 || r.x + r.w == box_w || r.y + r.h == box_h;
  return inside && flush;
}

}  // namespace shadowsmith
