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
#ifndef SHADOWSMITH_TENSOR_H_
#define SHADOWSMITH_TENSOR_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace shadowsmith {

// Dense row-major double tensor. Feature maps are (C, H, W), filters
// (C_out, C_in, KH, KW).
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<size_t> shape, double fill = 0.0);
  Tensor(std::vector<size_t> shape, std::vector<double> data);

  const std::vector<size_t>& shape() const { return shape_; }
  size_t rank() const { return shape_.size(); }
  size_t dim(size_t i) const { return shape_.at(i); }
  size_t numel() const { return data_.size(); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  double& operator[](size_t i) { return data_[i]; }
  double operator[](size_t i) const { return data_[i]; }

  double& at(size_t c, size_t h, size_t w) {
    return data_[(c * shape_[1] + h) * shape_[2] + w];
  }
  double at(size_t c, size_t h, size_t w) const {
    return data_[(c * shape_[1] + h) * shape_[2] + w];
  }
  double& at(size_t a, size_t b, size_t c, size_t d) {
    return data_[((a * shape_[1] + b) * shape_[2] + c) * shape_[3] + d];
  }
  double at(size_t a, size_t b, size_t c, size_t d) const {
    return data_[((a * shape_[1] + b) * shape_[2] + c) * shape_[3] + d];
  }

  std::string ShapeString() const;
  bool operator==(const Tensor&) const = default;

 private:
  std::vector<size_t> shape_;
  std::vector<double> data_;
};

// Binary layout, all little-endian:
//   "SSTN" | u32 version (1) | u32 rank | u64 dims[rank] | f64 data[numel]
std::vector<uint8_t> EncodeTensor(const Tensor& t);
Tensor DecodeTensor(std::span<const uint8_t> bytes);
void WriteTensor(const Tensor& t, const std::filesystem::path& path);
Tensor ReadTensor(const std::filesystem::path& path);

}  // namespace shadowsmith

#endif  // SHADOWSMITH_TENSOR_H_
