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
#include "shadowsmith/tensor.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>

#include "shadowsmith/errors.h"

namespace shadowsmith {
namespace {

constexpr char kMagic[4] = {'S', 'S', 'T', 'N'};
constexpr uint32_t kVersion = 1;

size_t Product(const std::vector<size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), size_t{1},
                         std::multiplies<>());
}

template <typename T>
void PutLe(std::vector<uint8_t>& out, T value) {
  uint64_t bits = 0;
  std::memcpy(&bits, &value, sizeof(T));
  for (size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<uint8_t>(bits >> (8 * i)));
  }
}

template <typename T>
T GetLe(std::span<const uint8_t> bytes, size_t& pos) {
  if (pos + sizeof(T) > bytes.size()) throw DecodeError("tensor data truncated");
  uint64_t bits = 0;
  for (size_t i = 0; i < sizeof(T); ++i) {
    bits |= static_cast<uint64_t>(bytes[pos + i]) << (8 * i);
  }
  pos += sizeof(T);
  T value;
  std::memcpy(&value, &bits, sizeof(T));
  return value;
}

}  // namespace

Tensor::Tensor(std::vector<size_t> shape, double fill)
    : shape_(std::move(shape)), data_(Product(shape_), fill) {}

Tensor::Tensor(std::vector<size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != Product(shape_)) {
    throw ContractError("Tensor: data length " + std::to_string(data_.size()) +
                        " does not match shape " + ShapeString());
  }
}

std::string Tensor::ShapeString() const {
  std::string s = "(";
  for (size_t i = 0; i < shape_.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape_[i]);
  }
  return s + ")";
}

std::vector<uint8_t> EncodeTensor(const Tensor& t) {
  std::vector<uint8_t> out(kMagic, kMagic + 4);
  PutLe<uint32_t>(out, kVersion);
  PutLe<uint32_t>(out, static_cast<uint32_t>(t.rank()));
  for (size_t d : t.shape()) PutLe<uint64_t>(out, d);
  for (double v : t.data()) PutLe<double>(out, v);
  return out;
}

Tensor DecodeTensor(std::span<const uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw DecodeError("not a tensor file (bad magic)");
  }
  size_t pos = 4;
  if (GetLe<uint32_t>(bytes, pos) != kVersion) {
    throw DecodeError("unsupported tensor file version");
  }
  const uint32_t rank = GetLe<uint32_t>(bytes, pos);
  std::vector<size_t> shape(rank);
  for (auto& d : shape) d = static_cast<size_t>(GetLe<uint64_t>(bytes, pos));
  const size_t n = Product(shape);
  if (bytes.size() - pos != n * sizeof(double)) {
    throw DecodeError("tensor payload size does not match its shape");
  }
  std::vector<double> data(n);
  for (auto& v : data) v = GetLe<double>(bytes, pos);
  return Tensor(std::move(shape), std::move(data));
}

void WriteTensor(const Tensor& t, const std::filesystem::path& path) {
  const auto bytes = EncodeTensor(t);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

Tensor ReadTensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open tensor file: " + path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return DecodeTensor(bytes);
}

}  // namespace shadowsmith
