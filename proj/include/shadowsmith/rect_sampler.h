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
#ifndef SHADOWSMITH_RECT_SAMPLER_H_
#define SHADOWSMITH_RECT_SAMPLER_H_

#include "shadowsmith/image.h"
#include "shadowsmith/random.h"

namespace shadowsmith {

// Closed interval [lo, hi] with 0 < lo <= hi.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

// Default ranges for the area ratio r_S and aspect ratio r_A.
inline constexpr Range kDefaultAreaRatioRange{0.2, 0.4};
inline constexpr Range kDefaultAspectRatioRange{0.5, 2.0};
inline constexpr int kDefaultMaxRetries = 16;

struct AugmentParams {
  double area_ratio = 0.0;    // r_S, fraction of the box area erased
  double aspect_ratio = 0.0;  // r_A = h_o / w_o
};

enum class Edge { kLeft = 0, kTop = 1, kRight = 2, kBottom = 3 };

// Erasure rectangle relative to the sub-image of its bounding box.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool operator==(const Rect&) const = default;
};

struct RectDims {
  double exact_w = 0.0;  // real-valued solution before rounding
  double exact_h = 0.0;
  int w = 0;             // rounded to nearest, at least 1
  int h = 0;
  bool feasible = false;  // rounded dims fit inside the box
};

struct SampledRect {
  Rect rect;
  AugmentParams params;
  RectDims dims;
  Edge edge = Edge::kLeft;
  bool clamped = false;
  int attempts = 0;
};

// Throws ConfigError unless 0 < lo <= hi.
void ValidateRange(const Range& r, const char* name);

AugmentParams SampleParams(Rng& rng, const Range& area_range,
                           const Range& aspect_range);

// Solves w_o*h_o = r_S*w*h, h_o = r_A*w_o.
RectDims ComputeRectDims(const BoundingBox& bbox, const AugmentParams& params);

// Picks one box edge uniformly and places a w x h rect flush against it at a
// uniform integer offset along that edge. Throws ContractError when the rect
// does not fit.
Rect PlaceRect(Rng& rng, const BoundingBox& bbox, int w, int h,
               Edge* chosen_edge = nullptr);

// Draws parameters until the rect fits (1 + max_retries attempts); falls
// back to clamping the last draw to the box.
SampledRect SampleRect(Rng& rng, const BoundingBox& bbox,
                       const Range& area_range, const Range& aspect_range,
                       int max_retries = kDefaultMaxRetries);

// True when the rect lies inside a w x h box and touches one of its edges.
bool IsFlushAndContained(const Rect& rect, int box_w, int box_h);

}  // namespace shadowsmith

#endif  // SHADOWSMITH_RECT_SAMPLER_H_
