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
#ifndef SHADOWSMITH_DCN_H_
#define SHADOWSMITH_DCN_H_

#include <cstdint>
#include <span>
#include <vector>

#include "shadowsmith/tensor.h"

namespace shadowsmith::dcn {

// Bilinear interpolation of a row-major height x width plane. Each of the
// four lattice neighbours outside the plane contributes 0.
double BilinearSample(std::span<const double> plane, int height, int width,
                      double row, double col);

// Partial derivatives of BilinearSample with respect to (row, col). At
// integer coordinates this is the right-derivative.
struct PositionGrad {
  double d_row = 0.0;
  double d_col = 0.0;
};
PositionGrad BilinearPositionGrad(std::span<const double> plane, int height,
                                  int width, double row, double col);

// Adds `scale` times the bilinear weights at (row, col) into `plane`; the
// adjoint of BilinearSample with respect to the plane values.
void BilinearScatter(std::span<double> plane, int height, int width,
                     double row, double col, double scale);

struct ConvParams {
  int stride = 1;
  int padding = 0;
};

// Output spatial size along one axis; throws ContractError when empty.
int ConvOutputSize(int in, int kernel, int stride, int padding);

// Deformable 2-D convolution.
//   input   (C_in, H, W)
//   weight  (C_out, C_in, KH, KW)
//   offsets (2*KH*KW, H_out, W_out); channel 2k is the row offset and 2k+1
//           the column offset of tap k = i*KW + j, shared by all input
//           channels.
//   output  (C_out, H_out, W_out)
// output(o, y, x) = sum_{c,i,j} weight(o,c,i,j) *
//     input_c(y*stride - pad + i + dr, x*stride - pad + j + dc)
// with input sampled bilinearly under zero padding.
Tensor DeformConv2dForward(const Tensor& input, const Tensor& weight,
                           const Tensor& offsets, const ConvParams& params);

struct DeformConv2dGrads {
  Tensor input;
  Tensor weight;
  Tensor offsets;
};

DeformConv2dGrads DeformConv2dBackward(const Tensor& input,
                                       const Tensor& weight,
                                       const Tensor& offsets,
                                       const Tensor& grad_output,
                                       const ConvParams& params);

// RoI in feature coordinates plus the pooled grid size.
struct RoiBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  int bins_h = 1;
  int bins_w = 1;
};

// Half-open integer range [begin, end) of lattice positions in a bin.
struct BinRange {
  int begin = 0;
  int end = 0;
  int size() const { return end > begin ? end - begin : 0; }
};

// Bin k of `bins` along an axis starting at `origin` with extent `extent`:
// [round(origin + k*extent/bins), round(origin + (k+1)*extent/bins)), with
// round-half-up.
BinRange RoiBin(double origin, double extent, int bins, int k);

struct RoiPoolResult {
  Tensor output;                   // (C, bins_h, bins_w)
  std::vector<uint8_t> empty_bin;  // bins_h*bins_w flags; empty bins are 0
  int empty_count = 0;
};

// Deformable RoI average pooling. Offsets are (2, bins_h, bins_w): one
// (row, col) displacement per bin, shared across channels. Each bin averages
// the bilinear samples at its lattice positions shifted by the bin offset,
// divided by the number of lattice positions in the bin.
RoiPoolResult DeformRoiPoolForward(const Tensor& input, const RoiBox& roi,
                                   const Tensor& offsets);

struct RoiPoolGrads {
  Tensor input;
  Tensor offsets;
};

RoiPoolGrads DeformRoiPoolBackward(const Tensor& input, const RoiBox& roi,
                                   const Tensor& offsets,
                                   const Tensor& grad_output);

}  // namespace shadowsmith::dcn

#endif  // SHADOWSMITH_DCN_H_
