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
#include "shadowsmith/dcn.h"

#include <cmath>
#include <string>

#include "shadowsmith/errors.h"

namespace shadowsmith::dcn {
namespace {

inline double At(std::span<const double> plane, int height, int width, int r,
                 int c) {
  if (r < 0 || r >= height || c < 0 || c >= width) return 0.0;
  return plane[static_cast<size_t>(r) * width + c];
}

void Expect(bool ok, const std::string& what) {
  if (!ok) throw ContractError(what);
}

void CheckRank(const Tensor& t, size_t rank, const char* name) {
  Expect(t.rank() == rank, std::string(name) + " must have rank " +
                               std::to_string(rank) + ", got shape " +
                               t.ShapeString());
}

struct ConvGeometry {
  int c_in, height, width;
  int c_out, kh, kw;
  int out_h, out_w;
};

ConvGeometry CheckConvShapes(const Tensor& input, const Tensor& weight,
                             const Tensor& offsets, const ConvParams& p) {
  CheckRank(input, 3, "input");
  CheckRank(weight, 4, "weight");
  CheckRank(offsets, 3, "offsets");
  Expect(p.stride >= 1, "stride must be >= 1");
  Expect(p.padding >= 0, "padding must be >= 0");
  ConvGeometry g;
  g.c_in = static_cast<int>(input.dim(0));
  g.height = static_cast<int>(input.dim(1));
  g.width = static_cast<int>(input.dim(2));
  g.c_out = static_cast<int>(weight.dim(0));
  g.kh = static_cast<int>(weight.dim(2));
  g.kw = static_cast<int>(weight.dim(3));
  Expect(static_cast<int>(weight.dim(1)) == g.c_in,
         "weight input channels (dim 1) = " + std::to_string(weight.dim(1)) +
             " but input has " + std::to_string(g.c_in) + " channels");
  g.out_h = ConvOutputSize(g.height, g.kh, p.stride, p.padding);
  g.out_w = ConvOutputSize(g.width, g.kw, p.stride, p.padding);
  Expect(static_cast<int>(offsets.dim(0)) == 2 * g.kh * g.kw,
         "offsets dim 0 must be 2*KH*KW = " + std::to_string(2 * g.kh * g.kw) +
             ", got " + std::to_string(offsets.dim(0)));
  Expect(static_cast<int>(offsets.dim(1)) == g.out_h,
         "offsets dim 1 must equal output height " + std::to_string(g.out_h) +
             ", got " + std::to_string(offsets.dim(1)));
  Expect(static_cast<int>(offsets.dim(2)) == g.out_w,
         "offsets dim 2 must equal output width " + std::to_string(g.out_w) +
             ", got " + std::to_string(offsets.dim(2)));
  return g;
}

}  // namespace

double BilinearSample(std::span<const double> plane, int height, int width,
                      double row, double col) {
  const double r0f = std::floor(row);
  const double c0f = std::floor(col);
  // Far outside the plane every neighbour is padding.
  if (r0f < -1.0 || r0f >= height || c0f < -1.0 || c0f >= width) return 0.0;
  const int r0 = static_cast<int>(r0f);
  const int c0 = static_cast<int>(c0f);
  const double lr = row - r0f;
  const double lc = col - c0f;
  return (1 - lr) * (1 - lc) * At(plane, height, width, r0, c0) +
         (1 - lr) * lc * At(plane, height, width, r0, c0 + 1) +
         lr * (1 - lc) * At(plane, height, width, r0 + 1, c0) +
         lr * lc * At(plane, height, width, r0 + 1, c0 + 1);
}

PositionGrad BilinearPositionGrad(std::span<const double> plane, int height,
                                  int width, double row, double col) {
  const double r0f = std::floor(row);
  const double c0f = std::floor(col);
  if (r0f < -1.0 || r0f >= height || c0f < -1.0 || c0f >= width) return {};
  const int r0 = static_cast<int>(r0f);
  const int c0 = static_cast<int>(c0f);
  const double lr = row - r0f;
  const double lc = col - c0f;
  const double v00 = At(plane, height, width, r0, c0);
  const double v01 = At(plane, height, width, r0, c0 + 1);
  const double v10 = At(plane, height, width, r0 + 1, c0);
  const double v11 = At(plane, height, width, r0 + 1, c0 + 1);
  return {(1 - lc) * (v10 - v00) + lc * (v11 - v01),
          (1 - lr) * (v01 - v00) + lr * (v11 - v10)};
}

void BilinearScatter(std::span<double> plane, int height, int width,
                     double row, double col, double scale) {
  const double r0f = std::floor(row);
  const double c0f = std::floor(col);
  if (r0f < -1.0 || r0f >= height || c0f < -1.0 || c0f >= width) return;
  const int r0 = static_cast<int>(r0f);
  const int c0 = static_cast<int>(c0f);
  const double lr = row - r0f;
  const double lc = col - c0f;
  auto add = [&](int r, int c, double w) {
    if (r >= 0 && r < height && c >= 0 && c < width) {
      plane[static_cast<size_t>(r) * width + c] += scale * w;
    }
  };
  add(r0, c0, (1 - lr) * (1 - lc));
  add(r0, c0 + 1, (1 - lr) * lc);
  add(r0 + 1, c0, lr * (1 - lc));
  add(r0 + 1, c0 + 1, lr * lc);
}

int ConvOutputSize(int in, int kernel, int stride, int padding) {
  const int span = in + 2 * padding - kernel;
  if (kernel < 1 || span < 0) {
    throw ContractError("kernel " + std::to_string(kernel) +
                        " does not fit input " + std::to_string(in) +
                        " with padding " + std::to_string(padding));
  }
  return span / stride + 1;
}

Tensor DeformConv2dForward(const Tensor& input, const Tensor& weight,
                           const Tensor& offsets, const ConvParams& params) {
  const ConvGeometry g = CheckConvShapes(input, weight, offsets, params);
  Tensor output({static_cast<size_t>(g.c_out), static_cast<size_t>(g.out_h),
                 static_cast<size_t>(g.out_w)});
  const size_t plane_size = static_cast<size_t>(g.height) * g.width;
  const int taps = g.kh * g.kw;
  std::vector<double> samples(static_cast<size_t>(g.c_in) * taps);

  for (int oy = 0; oy < g.out_h; ++oy) {
    for (int ox = 0; ox < g.out_w; ++ox) {
      // Gather the deformed samples once per output position.
      for (int k = 0; k < taps; ++k) {
        const int i = k / g.kw;
        const int j = k % g.kw;
        const double row = oy * params.stride - params.padding + i +
                           offsets.at(2 * k, oy, ox);
        const double col = ox * params.stride - params.padding + j +
                           offsets.at(2 * k + 1, oy, ox);
        for (int c = 0; c < g.c_in; ++c) {
          samples[static_cast<size_t>(c) * taps + k] = BilinearSample(
              input.data().subspan(c * plane_size, plane_size), g.height,
              g.width, row, col);
        }
      }
      for (int o = 0; o < g.c_out; ++o) {
        double acc = 0.0;
        const double* w = weight.data().data() + static_cast<size_t>(o) * g.c_in * taps;
        for (size_t n = 0; n < samples.size(); ++n) acc += w[n] * samples[n];
        output.at(o, oy, ox) = acc;
      }
    }
  }
  return output;
}

DeformConv2dGrads DeformConv2dBackward(const Tensor& input,
                                       const Tensor& weight,
                                       const Tensor& offsets,
                                       const Tensor& grad_output,
                                       const ConvParams& params) {
  const ConvGeometry g = CheckConvShapes(input, weight, offsets, params);
  CheckRank(grad_output, 3, "grad_output");
  Expect(static_cast<int>(grad_output.dim(0)) == g.c_out &&
             static_cast<int>(grad_output.dim(1)) == g.out_h &&
             static_cast<int>(grad_output.dim(2)) == g.out_w,
         "grad_output shape " + grad_output.ShapeString() +
             " does not match output shape (" + std::to_string(g.c_out) +
             ", " + std::to_string(g.out_h) + ", " + std::to_string(g.out_w) +
             ")");

  DeformConv2dGrads grads{Tensor(input.shape()), Tensor(weight.shape()),
                          Tensor(offsets.shape())};
  const size_t plane_size = static_cast<size_t>(g.height) * g.width;
  const int taps = g.kh * g.kw;

  for (int oy = 0; oy < g.out_h; ++oy) {
    for (int ox = 0; ox < g.out_w; ++ox) {
      for (int k = 0; k < taps; ++k) {
        const int i = k / g.kw;
        const int j = k % g.kw;
        const double row = oy * params.stride - params.padding + i +
                           offsets.at(2 * k, oy, ox);
        const double col = ox * params.stride - params.padding + j +
                           offsets.at(2 * k + 1, oy, ox);
        double d_row = 0.0;
        double d_col = 0.0;
        for (int c = 0; c < g.c_in; ++c) {
          const auto plane = input.data().subspan(c * plane_size, plane_size);
          // Weighted upstream gradient reaching this (channel, tap) sample.
          double coeff = 0.0;
          for (int o = 0; o < g.c_out; ++o) {
            coeff += grad_output.at(o, oy, ox) * weight.at(o, c, i, j);
          }
          const double sample =
              BilinearSample(plane, g.height, g.width, row, col);
          for (int o = 0; o < g.c_out; ++o) {
            grads.weight.at(o, c, i, j) += grad_output.at(o, oy, ox) * sample;
          }
          if (coeff != 0.0) {
            BilinearScatter(grads.input.data().subspan(c * plane_size, plane_size),
                            g.height, g.width, row, col, coeff);
            const PositionGrad pg =
                BilinearPositionGrad(plane, g.height, g.width, row, col);
            d_row += coeff * pg.d_row;
            d_col += coeff * pg.d_col;
          }
        }
        grads.offsets.at(2 * k, oy, ox) = d_row;
        grads.offsets.at(2 * k + 1, oy, ox) = d_col;
      }
    }
  }
  return grads;
}

BinRange RoiBin(double origin, double extent, int bins, int k) {
  auto round_half_up = [](double v) {
    return static_cast<int>(std::floor(v + 0.5));
  };
  return {round_half_up(origin + k * extent / bins),
          round_half_up(origin + (k + 1) * extent / bins)};
}

namespace {

void CheckRoi(const Tensor& input, const RoiBox& roi, const Tensor& offsets) {
  CheckRank(input, 3, "input");
  Expect(roi.bins_h >= 1 && roi.bins_w >= 1, "RoI bin grid must be >= 1x1");
  Expect(roi.w > 0.0 && roi.h > 0.0, "RoI width and height must be positive");
  const double height = static_cast<double>(input.dim(1));
  const double width = static_cast<double>(input.dim(2));
  Expect(roi.x < width && roi.y < height && roi.x + roi.w > 0.0 &&
             roi.y + roi.h > 0.0,
         "RoI does not intersect the feature plane");
  CheckRank(offsets, 3, "offsets");
  Expect(offsets.dim(0) == 2 && static_cast<int>(offsets.dim(1)) == roi.bins_h &&
             static_cast<int>(offsets.dim(2)) == roi.bins_w,
         "RoI offsets must have shape (2, " + std::to_string(roi.bins_h) +
             ", " + std::to_string(roi.bins_w) + "), got " +
             offsets.ShapeString());
}

}  // namespace

RoiPoolResult DeformRoiPoolForward(const Tensor& input, const RoiBox& roi,
                                   const Tensor& offsets) {
  CheckRoi(input, roi, offsets);
  const int channels = static_cast<int>(input.dim(0));
  const int height = static_cast<int>(input.dim(1));
  const int width = static_cast<int>(input.dim(2));
  const size_t plane_size = static_cast<size_t>(height) * width;

  RoiPoolResult result;
  result.output = Tensor({static_cast<size_t>(channels),
                          static_cast<size_t>(roi.bins_h),
                          static_cast<size_t>(roi.bins_w)});
  result.empty_bin.assign(static_cast<size_t>(roi.bins_h) * roi.bins_w, 0);

  for (int by = 0; by < roi.bins_h; ++by) {
    const BinRange rows = RoiBin(roi.y, roi.h, roi.bins_h, by);
    for (int bx = 0; bx < roi.bins_w; ++bx) {
      const BinRange cols = RoiBin(roi.x, roi.w, roi.bins_w, bx);
      const int count = rows.size() * cols.size();
      if (count == 0) {
        result.empty_bin[static_cast<size_t>(by) * roi.bins_w + bx] = 1;
        ++result.empty_count;
        continue;
      }
      const double dr = offsets.at(0, by, bx);
      const double dc = offsets.at(1, by, bx);
      for (int c = 0; c < channels; ++c) {
        const auto plane = input.data().subspan(c * plane_size, plane_size);
        double acc = 0.0;
        for (int r = rows.begin; r < rows.end; ++r) {
          for (int q = cols.begin; q < cols.end; ++q) {
            acc += BilinearSample(plane, height, width, r + dr, q + dc);
          }
        }
        result.output.at(c, by, bx) = acc / count;
      }
    }
  }
  return result;
}

RoiPoolGrads DeformRoiPoolBackward(const Tensor& input, const RoiBox& roi,
                                   const Tensor& offsets,
                                   const Tensor& grad_output) {
  CheckRoi(input, roi, offsets);
  const int channels = static_cast<int>(input.dim(0));
  const int height = static_cast<int>(input.dim(1));
  const int width = static_cast<int>(input.dim(2));
  CheckRank(grad_output, 3, "grad_output");
  Expect(static_cast<int>(grad_output.dim(0)) == channels &&
             static_cast<int>(grad_output.dim(1)) == roi.bins_h &&
             static_cast<int>(grad_output.dim(2)) == roi.bins_w,
         "grad_output shape " + grad_output.ShapeString() +
             " does not match pooled shape");
  const size_t plane_size = static_cast<size_t>(height) * width;

  RoiPoolGrads grads{Tensor(input.shape()), Tensor(offsets.shape())};
  for (int by = 0; by < roi.bins_h; ++by) {
    const BinRange rows = RoiBin(roi.y, roi.h, roi.bins_h, by);
    for (int bx = 0; bx < roi.bins_w; ++bx) {
      const BinRange cols = RoiBin(roi.x, roi.w, roi.bins_w, bx);
      const int count = rows.size() * cols.size();
      if (count == 0) continue;
      const double dr = offsets.at(0, by, bx);
      const double dc = offsets.at(1, by, bx);
      double g_row = 0.0;
      double g_col = 0.0;
      for (int c = 0; c < channels; ++c) {
        const double scale = grad_output.at(c, by, bx) / count;
        if (scale == 0.0) continue;
        const auto plane = input.data().subspan(c * plane_size, plane_size);
        auto grad_plane = grads.input.data().subspan(c * plane_size, plane_size);
        for (int r = rows.begin; r < rows.end; ++r) {
          for (int q = cols.begin; q < cols.end; ++q) {
            BilinearScatter(grad_plane, height, width, r + dr, q + dc, scale);
            const PositionGrad pg =
                BilinearPositionGrad(plane, height, width, r + dr, q + dc);
            g_row += scale * pg.d_row;
            g_col += scale * pg.d_col;
          }
        }
      }
      grads.offsets.at(0, by, bx) = g_row;
      grads.offsets.at(1, by, bx) = g_col;
    }
  }
  return grads;
}

}  // namespace shadowsmith::dcn
