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
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"

namespace shadowsmith {
namespace {

using testing::RampRaster;

PixelSet SetOf(std::vector<uint16_t> v, uint32_t levels = 256) {
  return PixelSet{std::move(v), levels};
}

SubImage Row(std::vector<uint16_t> v) {
  const int n = static_cast<int>(v.size());
  return SubImage(n, 1, std::move(v));
}

TEST(ContextPixelsTest, DiagonalMask) {
  const SubImage sub(2, 2, std::vector<uint16_t>{10, 20, 30, 40});
  const BinaryGrid mask(2, 2, std::vector<uint8_t>{1, 0, 0, 1});
  EXPECT_EQ(ContextPixels(sub, mask, 256).values, (std::vector<uint16_t>{20, 30}));
}

TEST(ContextPixelsTest, EmptyAndFullMasks) {
  const SubImage sub(2, 2, std::vector<uint16_t>{10, 20, 30, 40});
  EXPECT_EQ(ContextPixels(sub, BinaryGrid(2, 2, 0), 256).size(), 4u);
  EXPECT_TRUE(ContextPixels(sub, BinaryGrid(2, 2, 1), 256).empty());
}

TEST(ContextPixelsTest, DuplicatesKept) {
  const SubImage sub(3, 1, std::vector<uint16_t>{7, 7, 7});
  EXPECT_EQ(ContextPixels(sub, BinaryGrid(3, 1, 0), 256).size(), 3u);
}

TEST(ContextPixelsTest, DimensionMismatch) {
  EXPECT_THROW(ContextPixels(SubImage(2, 2), BinaryGrid(2, 3), 256), ContractError);
}

TEST(ContextPixelsTest, CompletenessProperty) {
  std::mt19937 gen(3);
  for (int t = 0; t < 200; ++t) {
    const int w = 1 + gen() % 20, h = 1 + gen() % 20;
    SubImage sub(w, h);
    BinaryGrid mask(w, h);
    for (auto& v : sub.data()) v = gen() % 256;
    int ones = 0;
    for (auto& m : mask.data()) ones += (m = gen() % 2);
    EXPECT_EQ(ContextPixels(sub, mask, 256).size() + ones, size_t(w) * h);
  }
}

TEST(HistogramTest, CountsAndCumulative) {
  const Histogram h = Histogram::Of(SetOf({1, 1, 3}, 4));
  EXPECT_EQ(h.total(), 3u);
  EXPECT_EQ(h.count(1), 2u);
  EXPECT_EQ(h.Cumulative(), (std::vector<uint64_t>{0, 2, 2, 3}));
}

TEST(MatchHistogramTest, ConstantReference) {
  const SubImage out = MatchHistogram(SubImage(3, 3, 5), Histogram::Of(SetOf({10, 10, 10})));
  for (uint16_t v : out.data()) EXPECT_EQ(v, 10);
}

TEST(MatchHistogramTest, ThirdsMapping) {
  const SubImage out =
      MatchHistogram(Row({0, 128, 255}), Histogram::Of(SetOf({50, 100, 150})));
  EXPECT_EQ(out.values(), (std::vector<uint16_t>{50, 100, 150}));
}

TEST(MatchHistogramTest, EmptyReferenceIsContractError) {
  EXPECT_THROW(MatchHistogram(Row({1}), Histogram(256)), ContractError);
}

TEST(MatchHistogramTest, SixteenBitLevels) {
  const SubImage out = MatchHistogram(Row({0, 40000, 65535}),
                                      Histogram::Of(SetOf({1000, 30000, 60000}, 65536)));
  EXPECT_EQ(out.values(), (std::vector<uint16_t>{1000, 30000, 60000}));
}

// Direct evaluation of the definition: smallest r with
// count_ref(<= r) / n_ref >= count_src(<= v) / n_src.
uint16_t OracleMap(const std::vector<uint16_t>& src, const std::vector<uint16_t>& ref,
                   uint16_t v) {
  const uint64_t src_le = std::count_if(src.begin(), src.end(), [&](uint16_t s) { return s <= v; });
  for (int r = 0; r < 256; ++r) {
    const uint64_t ref_le = std::count_if(ref.begin(), ref.end(), [&](uint16_t x) { return x <= r; });
    // Cross-multiplied to stay exact.
    if (ref_le * src.size() >= src_le * ref.size()) return static_cast<uint16_t>(r);
  }
  return 255;
}

TEST(MatchingMapTest, AgreesWithDefinitionAndIsMonotone) {
  std::mt19937 gen(12);
  for (int t = 0; t < 300; ++t) {
    std::vector<uint16_t> src(1 + gen() % 80), ref(1 + gen() % 80);
    const int spread = 1 + gen() % 256;
    for (auto& v : src) v = gen() % 256;
    for (auto& v : ref) v = (gen() % spread + gen() % 64) % 256;
    const auto map = MatchingMap(Histogram::Of(SetOf(src)), Histogram::Of(SetOf(ref)));
    ASSERT_EQ(map.size(), 256u);
    const std::set<uint16_t> support(ref.begin(), ref.end());
    for (int v = 0; v < 256; ++v) {
      if (v > 0) EXPECT_LE(map[v - 1], map[v]);
    }
    for (uint16_t v : std::set<uint16_t>(src.begin(), src.end())) {
      EXPECT_EQ(map[v], OracleMap(src, ref, v));
      EXPECT_TRUE(support.count(map[v])) << int(v);
    }
  }
}

TEST(MatchHistogramTest, DistinctEqualSizeGivesReferenceByRank) {
  std::mt19937 gen(13);
  std::vector<uint16_t> levels(256);
  std::iota(levels.begin(), levels.end(), 0);
  for (int t = 0; t < 200; ++t) {
    const size_t n = 1 + gen() % 64;
    std::shuffle(levels.begin(), levels.end(), gen);
    std::vector<uint16_t> patch(levels.begin(), levels.begin() + n);
    std::shuffle(levels.begin(), levels.end(), gen);
    std::vector<uint16_t> ref(levels.begin(), levels.begin() + n);
    const SubImage out = MatchHistogram(Row(patch), Histogram::Of(SetOf(ref)));
    std::vector<uint16_t> sorted_ref = ref;
    std::sort(sorted_ref.begin(), sorted_ref.end());
    // Rank oracle: the k-th smallest patch value becomes the k-th smallest
    // reference value.
    for (size_t i = 0; i < n; ++i) {
      const size_t rank = std::count_if(patch.begin(), patch.end(),
                                        [&](uint16_t p) { return p < patch[i]; });
      EXPECT_EQ(out.data()[i], sorted_ref[rank]);
    }
    std::vector<uint16_t> got = out.values();
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, sorted_ref);
  }
}

TEST(MatchHistogramTest, PatchDrawnFromReferenceIsPermutation) {
  std::mt19937 gen(14);
  std::vector<uint16_t> levels(256);
  std::iota(levels.begin(), levels.end(), 0);
  for (int t = 0; t < 50; ++t) {
    std::shuffle(levels.begin(), levels.end(), gen);
    std::vector<uint16_t> ref(levels.begin(), levels.begin() + 1 + gen() % 64);
    std::vector<uint16_t> patch = ref;
    std::shuffle(patch.begin(), patch.end(), gen);
    EXPECT_EQ(MatchHistogram(Row(patch), Histogram::Of(SetOf(ref))).values(), patch);
  }
}

bool IsWindowOf(const SubImage& p, const ImageRaster& img) {
  for (int oy = 0; oy + p.height() <= img.height(); ++oy) {
    for (int ox = 0; ox + p.width() <= img.width(); ++ox) {
      bool ok = true;
      for (int y = 0; y < p.height() && ok; ++y) {
        for (int x = 0; x < p.width() && ok; ++x) ok = p.at(x, y) == img.at(ox + x, oy + y);
      }
      if (ok) return true;
    }
  }
  return false;
}

TEST(SampleNoisePatchTest, WindowOfSingleImage) {
  std::vector<ImageRaster> pool{RampRaster(64, 64, 16)};
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const SubImage p = SampleNoisePatch(rng, pool, 16, 16);
    EXPECT_EQ(p.width(), 16);
    EXPECT_EQ(p.height(), 16);
    EXPECT_TRUE(IsWindowOf(p, pool[0]));
  }
}

TEST(SampleNoisePatchTest, FullSizeWindowIsWholeImage) {
  std::vector<ImageRaster> pool{RampRaster(12, 9)};
  Rng rng(2);
  EXPECT_EQ(SampleNoisePatch(rng, pool, 12, 9), pool[0].pixels());
}

TEST(SampleNoisePatchTest, SmallPoolIsTiled) {
  std::vector<ImageRaster> pool{RampRaster(8, 8), RampRaster(8, 8)};
  for (int x = 0; x < 8; ++x) pool[1].at(x, 0) = 200;
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const SubImage p = SampleNoisePatch(rng, pool, 20, 20);
    ASSERT_EQ(p.width(), 20);
    std::set<uint16_t> src(pool[0].data().begin(), pool[0].data().end());
    for (uint16_t v : p.data()) EXPECT_TRUE(src.count(v));
    for (int y = 0; y < 12; ++y) {
      for (int x = 0; x < 12; ++x) EXPECT_EQ(p.at(x, y), p.at(x + 8, y + 8));
    }
  }
}

TEST(SampleNoisePatchTest, OnlyLargeEnoughImagesAreUsed) {
  std::vector<ImageRaster> pool{ImageRaster(4, 4, 8, 1), ImageRaster(32, 32, 8, 2)};
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const SubImage p = SampleNoisePatch(rng, pool, 8, 8);
    for (uint16_t v : p.data()) EXPECT_EQ(v, 2);
  }
}

TEST(SampleNoisePatchTest, EmptyPoolIsConfigError) {
  Rng rng(5);
  EXPECT_THROW(SampleNoisePatch(rng, {}, 4, 4), ConfigError);
}

TEST(SampleNoisePatchTest, Deterministic) {
  std::vector<ImageRaster> pool{RampRaster(40, 40), RampRaster(30, 50)};
  Rng a(99), b(99);
  for (int i = 0; i < 30; ++i) {
    EXPECT_EQ(SampleNoisePatch(a, pool, 9, 7), SampleNoisePatch(b, pool, 9, 7));
  }
}

}  // namespace
}  // namespace shadowsmith
