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
#ifndef SHADOWSMITH_CONTEXT_MATCH_H_
#define SHADOWSMITH_CONTEXT_MATCH_H_

#include <cstdint>
#include <span>
#include <vector>

#include "shadowsmith/image.h"
#include "shadowsmith/random.h"

namespace shadowsmith {

// Multiset of intensity levels, e.g. the context set C_n of one instance.
struct PixelSet {
  std::vector<uint16_t> values;
  uint32_t level_count = 256;

  bool empty() const { return values.empty(); }
  size_t size() const { return values.size(); }
};

class Histogram {
 public:
  Histogram() = default;
  explicit Histogram(uint32_t level_count) : counts_(level_count, 0) {}

  static Histogram Of(const PixelSet& set);
  // level_count must exceed every value in the grid.
  static Histogram Of(const SubImage& grid, uint32_t level_count);

  void Add(uint16_t level) {
    ++counts_.at(level);
    ++total_;
  }

  uint32_t level_count() const { return static_cast<uint32_t>(counts_.size()); }
  uint64_t total() const { return total_; }
  uint64_t count(uint32_t level) const { return counts_[level]; }
  std::span<const uint64_t> counts() const { return counts_; }

  // Running sums: cumulative()[v] = number of samples <= v.
  std::vector<uint64_t> Cumulative() const;

 private:
  std::vector<uint64_t> counts_;
  uint64_t total_ = 0;
};

// { sub(x) : mask_crop(x) == 0 }, duplicates kept, scanned row-major.
// Throws ContractError on a dimension mismatch.
PixelSet ContextPixels(const SubImage& sub, const BinaryGrid& mask_crop,
                       uint32_t level_count);

// Draws a w x h window. A pool image large enough for the window is chosen
// uniformly, then the window position. If no image is large enough, the
// largest image (by area, first on ties) is tiled from a random origin.
// Throws ConfigError for an empty pool.
SubImage SampleNoisePatch(Rng& rng, std::span<const ImageRaster> pool, int w,
                          int h);

// Level map for CDF matching: for every level v of `source`, the smallest
// reference level r with CDF_ref(r) >= CDF_source(v). Exact integer
// arithmetic, no interpolation. Throws ContractError for an empty reference.
std::vector<uint16_t> MatchingMap(const Histogram& source,
                                  const Histogram& reference);

// Remaps patch levels so their distribution follows `reference`.
SubImage MatchHistogram(const SubImage& patch, const Histogram& reference);

}  // namespace shadowsmith

#endif  // SHADOWSMITH_CONTEXT_MATCH_H_
