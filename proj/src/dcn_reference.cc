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
#include "shadowsmith/dcn_reference.h"

#include <cmath>

namespace shadowsmith::dcn::reference {

Tensor Conv2d(const Tensor& input, const Tensor& weight,
              const ConvParams& params) {
  const int c_in = static_cast<int>(input.dim(0));
  const int height = static_cast<int>(input.dim(1));
  const int width = static_cast<int>(input.dim(2));
  const int c_out = static_cast<int>(weight.dim(0));
  const int kh = static_cast<int>(weight.dim(2));
  const int kw = static_cast<int>(weight.dim(3));
  const int out_h = (height + 2 * params.padding - kh) / params.stride + 1;
  const int out_w = (width + 2 * params.padding - kw) / params.stride + 1;
  Tensor out({static_cast<size_t>(c_out), static_cast<size_t>(out_h),
              static_cast<size_t>(out_w)});
  for (int o = 0; o < c_out; ++o) {
    for (int y = 0; y < out_h; ++y) {
      for (int x = 0; x < out_w; ++x) {
        double acc = 0.0;
        for (int c = 0; c < c_in; ++c) {
          for (int i = 0; i < kh; ++i) {
            for (int j = 0; j < kw; ++j) {
              const int r = y * params.stride - params.padding + i;
              const int q = x * params.stride - params.padding + j;
              if (r < 0 || r >= height || q < 0 || q >= width) continue;
              acc += weight.at(o, c, i, j) * input.at(c, r, q);
            }
          }
        }
        out.at(o, y, x) = acc;
      }
    }
  }
  return out;
}

Tensor AverageRoiPool(const Tensor& input, const RoiBox& roi) {
  const int channels = static_cast<int>(input.dim(0));
  const int height = static_cast<int>(input.dim(1));
  const int width = static_cast<int>(input.dim(2));
  Tensor out({static_cast<size_t>(channels), static_cast<size_t>(roi.bins_h),
              static_cast<size_t>(roi.bins_w)});
  auto edge = [](double origin, double extent, int bins, int k) {
    return static_cast<int>(std::floor(origin + k * extent / bins + 0.5));
  };
  for (int by = 0; by < roi.bins_h; ++by) {
    const int r0 = edge(roi.y, roi.h, roi.bins_h, by);
    const int r1 = edge(roi.y, roi.h, roi.bins_h, by + 1);
    for (int bx = 0; bx < roi.bins_w; ++bx) {
      const int q0 = edge(roi.x, roi.w, roi.bins_w, bx);
      const int q1 = edge(roi.x, roi.w, roi.bins_w, bx + 1);
      if (r1 <= r0 || q1 <= q0) continue;
      const double n = static_cast<double>(r1 - r0) * (q1 - q0);
      for (int c = 0; c < channels; ++c) {
        double acc = 0.0;
        for (int r = r0; r < r1; ++r) {
          for (int q = q0; q < q1; ++q) {
            if (r >= 0 && r < height && q >= 0 && q < width) acc += input.at(c, r, q);
          }
        }
        out.at(c, by, bx) = acc / n;
      }
    }
  }
  return out;
}

}  // namespace shadowsmith::dcn::reference
