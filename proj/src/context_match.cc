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
#include "shadowsmith/context_match.h"

#include <algorithm>
#include <string>

namespace shadowsmith {
namespace {

__extension__ typedef unsigned __int128 Wide;

}  // namespace

Histogram Histogram::Of(const PixelSet& set) {
  Histogram h(set.level_count);
  for (uint16_t v : set.values) {
    if (v >= set.level_count) throw ContractError("PixelSet value out of range");
    h.Add(v);
  }
  return h;
}

Histogram Histogram::Of(const SubImage& grid, uint32_t level_count) {
  Histogram h(level_count);
  for (uint16_t v : grid.data()) {
    if (v >= level_count) throw ContractError("grid value out of range");
    h.Add(v);
  }
  return h;
}

std::vector<uint64_t> Histogram::Cumulative() const {
  std::vector<uint64_t> cum(counts_.size());
  uint64_t acc = 0;
  for (size_t i = 0; i < counts_.size(); ++i) {
    acc += counts_[i];
    cum[i] = acc;
  }
  return cum;
}

PixelSet ContextPixels(const SubImage& sub, const BinaryGrid& mask_crop,
                       uint32_t level_count) {
  if (sub.width() != mask_crop.width() || sub.height() != mask_crop.height()) {
    throw ContractError("ContextPixels: sub-image is " +
                        std::to_string(sub.width()) + "x" +
                        std::to_string(sub.height()) + " but mask crop is " +
                        std::to_string(mask_crop.width()) + "x" +
                        std::to_string(mask_crop.height()));
  }
  PixelSet set;
  set.level_count = level_count;
  const auto values = sub.data();
  const auto mask = mask_crop.data();
  for (size_t i = 0; i < values.size(); ++i) {
    if (mask[i] == 0) set.values.push_back(values[i]);
  }
  return set;
}

SubImage SampleNoisePatch(Rng& rng, std::span<const ImageRaster> pool, int w,
                          int h) {
  if (pool.empty()) throw ConfigError("background pool is empty");
  if (w < 1 || h < 1) throw ContractError("SampleNoisePatch: empty window");

  std::vector<size_t> candidates;
  for (size_t i = 0; i < pool.size(); ++i) {
    if (pool[i].width() >= w && pool[i].height() >= h) candidates.push_back(i);
  }

  SubImage patch(w, h);
  if (!candidates.empty()) {
    const auto& src = pool[candidates[static_cast<size_t>(
        rng.UniformInt(0, static_cast<int64_t>(candidates.size()) - 1))]];
    const int ox = static_cast<int>(rng.UniformInt(0, src.width() - w));
    const int oy = static_cast<int>(rng.UniformInt(0, src.height() - h));
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) patch.at(x, y) = src.at(ox + x, oy + y);
    }
    return patch;
  }

  size_t largest = 0;
  for (size_t i = 1; i < pool.size(); ++i) {
    const int64_t a = static_cast<int64_t>(pool[i].width()) * pool[i].height();
    const int64_t b =
        static_cast<int64_t>(pool[largest].width()) * pool[largest].height();
    if (a > b) largest = i;
  }
  const auto& src = pool[largest];
  if (src.width() == 0 || src.height() == 0) {
    throw ConfigError("background pool image is empty");
  }
  const int ox = static_cast<int>(rng.UniformInt(0, src.width() - 1));
  const int oy = static_cast<int>(rng.UniformInt(0, src.height() - 1));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      patch.at(x, y) = src.at((ox + x) % src.width(), (oy + y) % src.height());
    }
  }
  return patch;
}

std::vector<uint16_t> MatchingMap(const Histogram& source,
                                  const Histogram& reference) {
  if (reference.total() == 0) {
    throw ContractError("MatchingMap: reference histogram is empty");
  }
  const auto src_cum = source.Cumulative();
  const auto ref_cum = reference.Cumulative();
  const uint64_t n_src = std::max<uint64_t>(source.total(), 1);
  const uint64_t n_ref = reference.total();

  // CDF_ref(r) >= CDF_src(v)  <=>  ref_cum[r] * n_src >= src_cum[v] * n_ref.
  // Both sides grow with v, so r only moves forward.
  std::vector<uint16_t> map(source.level_count());
  uint32_t r = 0;
  for (uint32_t v = 0; v < source.level_count(); ++v) {
    const Wide target = static_cast<Wide>(src_cum[v]) * n_ref;
    while (static_cast<Wide>(ref_cum[r]) * n_src < target) ++r;
    map[v] = static_cast<uint16_t>(r);
  }
  return map;
}

SubImage MatchHistogram(const SubImage& patch, const Histogram& reference) {
  uint32_t levels = reference.level_count();
  for (uint16_t v : patch.data()) levels = std::max<uint32_t>(levels, v + 1u);
  const auto map = MatchingMap(Histogram::Of(patch, levels), reference);
  SubImage out(patch.width(), patch.height());
  const auto in = patch.data();
  auto dst = out.data();
  for (size_t i = 0; i < in.size(); ++i) dst[i] = map[in[i]];
  return out;
}

}  // namespace shadowsmith
