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
#include "shadowsmith/augment.h"

#include <map>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "shadowsmith/context_match.h"
#include "test_util.h"

namespace shadowsmith {
namespace {

using testing::ChangesOutsideRects;
using testing::SmallSynthDataset;

AugmentConfig Config(Method m, uint64_t seed = 5) {
  AugmentConfig cfg;
  cfg.method = m;
  cfg.seed = seed;
  return cfg;
}

std::vector<BoundingBox> RectsFor(const AugmentReport& rep, int copy, int64_t image_id) {
  std::vector<BoundingBox> out;
  for (const auto& r : rep.records) {
    if (r.copy == copy && r.image_id == image_id) out.push_back(r.AbsoluteRect());
  }
  return out;
}

class AugmentTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { ds_ = new Dataset(SmallSynthDataset(12, 21)); }
  static void TearDownTestSuite() { delete ds_; }
  static const Dataset& ds() { return *ds_; }
  static Dataset* ds_;
};
Dataset* AugmentTest::ds_ = nullptr;

TEST(MethodTest, ParseAndName) {
  for (const char* n : {"cpil", "re", "dbi", "none"}) {
    EXPECT_STREQ(MethodName(ParseMethod(n)), n);
  }
  EXPECT_THROW(ParseMethod("cutout"), ConfigError);
}

TEST(AugmentConfigTest, Validation) {
  AugmentConfig cfg;
  EXPECT_NO_THROW(cfg.Validate());
  cfg.apply_prob = 1.5;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg = AugmentConfig{};
  cfg.copies = 0;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg = AugmentConfig{};
  cfg.area_range = {0.5, 0.1};
  EXPECT_THROW(cfg.Validate(), ConfigError);
}

TEST_F(AugmentTest, NoneIsIdentity) {
  const AugmentResult r = AugmentDataset(ds(), Config(Method::kNone));
  ASSERT_EQ(r.dataset.images.size(), ds().images.size());
  for (size_t i = 0; i < ds().images.size(); ++i) {
    EXPECT_EQ(r.dataset.images[i].raster, ds().images[i].raster);
    EXPECT_EQ(r.dataset.images[i].file_name, ds().images[i].file_name);
  }
  EXPECT_EQ(DatasetToJson(r.dataset).dump(), DatasetToJson(ds()).dump());
  EXPECT_TRUE(r.report.records.empty());
}

TEST_F(AugmentTest, ContextPreservingInstanceFillsFromContextSupport) {
  int checked = 0;
  for (const auto& ann : ds().annotations) {
    const ImageRaster& before = ds().FindImage(ann.image_id)->raster;
    ImageRaster after = before;
    const PixelSet context = ContextPixels(CropSubImage(before, ann.bbox),
                                           CropMask(ann.mask, ann.bbox), 256);
    Rng rng(ann.id);
    const auto rec = AugmentInstance(after, ann, Config(Method::kContextPreserving),
                                     ds().background_pool, rng);
    ASSERT_TRUE(rec.has_value());
    const BoundingBox abs = rec->AbsoluteRect();
    EXPECT_EQ(ChangesOutsideRects(before, after, {abs}), 0);
    if (context.empty()) continue;
    const std::set<uint16_t> support(context.values.begin(), context.values.end());
    for (int y = abs.y; y < abs.y + abs.h; ++y) {
      for (int x = abs.x; x < abs.x + abs.w; ++x) {
        ASSERT_TRUE(support.count(after.at(x, y))) << "annotation " << ann.id;
      }
    }
    ++checked;
  }
  EXPECT_GT(checked, 10);
}

TEST_F(AugmentTest, RandomErasureIsUniform) {
  std::vector<uint64_t> counts(256, 0);
  uint64_t pooled = 0;
  Rng rng(3);
  while (pooled < 100000) {
    for (const auto& ann : ds().annotations) {
      ImageRaster r = ds().FindImage(ann.image_id)->raster;
      const auto rec = AugmentInstance(r, ann, Config(Method::kRandomErasure), {}, rng);
      const BoundingBox abs = rec->AbsoluteRect();
      for (int y = abs.y; y < abs.y + abs.h; ++y) {
        for (int x = abs.x; x < abs.x + abs.w; ++x) ++counts[r.at(x, y)];
      }
      pooled += abs.area();
    }
  }
  const double stat = testing::ChiSquareUniform(counts);
  EXPECT_LT(stat, testing::ChiSquareCritical(255, 0.01)) << "pixels " << pooled;
}

TEST(ChiSquareCriticalTest, TableValue) {
  EXPECT_NEAR(testing::ChiSquareCritical(255, 0.01), 310.457, 1e-3);
}

TEST_F(AugmentTest, DirectInsertionCopiesBackgroundValues) {
  std::set<uint16_t> bg;
  for (const auto& b : ds().background_pool) bg.insert(b.data().begin(), b.data().end());
  const AugmentResult r = AugmentDataset(ds(), Config(Method::kDirectInsertion));
  for (size_t i = 0; i < ds().images.size(); ++i) {
    const auto rects = RectsFor(r.report, 0, ds().images[i].id);
    const ImageRaster& out = r.dataset.images[i].raster;
    EXPECT_EQ(ChangesOutsideRects(ds().images[i].raster, out, rects), 0);
    for (const auto& a : rects) {
      for (int y = a.y; y < a.y + a.h; ++y) {
        for (int x = a.x; x < a.x + a.w; ++x) EXPECT_TRUE(bg.count(out.at(x, y)));
      }
    }
  }
}

TEST_F(AugmentTest, ChangesStayInsideRecordedRects) {
  for (Method m : {Method::kContextPreserving, Method::kRandomErasure, Method::kDirectInsertion}) {
    AugmentConfig cfg = Config(m);
    cfg.copies = 2;
    const AugmentResult r = AugmentDataset(ds(), cfg);
    const size_t n = ds().images.size();
    ASSERT_EQ(r.dataset.images.size(), 2 * n);
    for (int copy = 0; copy < 2; ++copy) {
      for (size_t i = 0; i < n; ++i) {
        EXPECT_EQ(ChangesOutsideRects(ds().images[i].raster,
                                      r.dataset.images[copy * n + i].raster,
                                      RectsFor(r.report, copy, ds().images[i].id)),
                  0);
      }
    }
  }
}

TEST_F(AugmentTest, WorkerCountDoesNotChangeOutput) {
  for (Method m : {Method::kContextPreserving, Method::kRandomErasure, Method::kDirectInsertion}) {
    AugmentConfig one = Config(m, 1234);
    one.copies = 2;
    AugmentConfig many = one;
    many.workers = 8;
    const AugmentResult a = AugmentDataset(ds(), one);
    const AugmentResult b = AugmentDataset(ds(), many);
    ASSERT_EQ(a.dataset.images.size(), b.dataset.images.size());
    for (size_t i = 0; i < a.dataset.images.size(); ++i) {
      EXPECT_EQ(a.dataset.images[i].raster, b.dataset.images[i].raster);
    }
    EXPECT_EQ(a.report.records, b.report.records);
    EXPECT_EQ(a.report.ToJson(one).dump(), b.report.ToJson(many).dump());
  }
}

TEST_F(AugmentTest, DifferentSeedsDiffer) {
  const AugmentResult a = AugmentDataset(ds(), Config(Method::kRandomErasure, 1));
  const AugmentResult b = AugmentDataset(ds(), Config(Method::kRandomErasure, 2));
  EXPECT_NE(a.dataset.images[0].raster, b.dataset.images[0].raster);
}

TEST_F(AugmentTest, ZeroProbabilityReducesToNone) {
  for (Method m : {Method::kContextPreserving, Method::kRandomErasure, Method::kDirectInsertion}) {
    AugmentConfig cfg = Config(m);
    cfg.apply_prob = 0.0;
    const AugmentResult r = AugmentDataset(ds(), cfg);
    for (size_t i = 0; i < ds().images.size(); ++i) {
      EXPECT_EQ(r.dataset.images[i].raster, ds().images[i].raster);
    }
    EXPECT_TRUE(r.report.records.empty());
    EXPECT_EQ(r.report.instances_seen, static_cast<int64_t>(ds().annotations.size()));
  }
}

TEST_F(AugmentTest, OneRecordPerInstancePerCopy) {
  AugmentConfig cfg = Config(Method::kContextPreserving);
  cfg.copies = 3;
  const AugmentResult r = AugmentDataset(ds(), cfg);
  ASSERT_EQ(r.report.records.size(), 3 * ds().annotations.size());
  std::set<std::pair<int, int64_t>> keys;
  for (const auto& rec : r.report.records) keys.insert({rec.copy, rec.annotation_id});
  EXPECT_EQ(keys.size(), r.report.records.size());
  EXPECT_EQ(r.report.images_written, static_cast<int64_t>(3 * ds().images.size()));
  EXPECT_TRUE(std::is_sorted(r.report.records.begin(), r.report.records.end(),
                             [](const InstanceRecord& a, const InstanceRecord& b) {
                               return std::tie(a.copy, a.image_id, a.annotation_id) <
                                      std::tie(b.copy, b.image_id, b.annotation_id);
                             }));
}

TEST_F(AugmentTest, PartialProbabilityAppliesSomeInstances) {
  AugmentConfig cfg = Config(Method::kRandomErasure);
  cfg.apply_prob = 0.5;
  cfg.copies = 8;
  const AugmentResult r = AugmentDataset(ds(), cfg);
  const double frac = double(r.report.records.size()) / (8.0 * ds().annotations.size());
  EXPECT_GT(frac, 0.35);
  EXPECT_LT(frac, 0.65);
}

TEST_F(AugmentTest, MissingPoolIsConfigError) {
  Dataset no_pool = ds();
  no_pool.background_pool.clear();
  EXPECT_THROW(AugmentDataset(no_pool, Config(Method::kContextPreserving)), ConfigError);
  EXPECT_THROW(AugmentDataset(no_pool, Config(Method::kDirectInsertion)), ConfigError);
  EXPECT_NO_THROW(AugmentDataset(no_pool, Config(Method::kRandomErasure)));
}

TEST_F(AugmentTest, PoolDepthMismatchIsConfigError) {
  Dataset bad = ds();
  bad.background_pool.push_back(ImageRaster(64, 64, 16, 1000));
  EXPECT_THROW(AugmentDataset(bad, Config(Method::kDirectInsertion)), ConfigError);
}

TEST_F(AugmentTest, CopiesAreRenumbered) {
  AugmentConfig cfg = Config(Method::kContextPreserving);
  cfg.copies = 2;
  const AugmentResult r = AugmentDataset(ds(), cfg);
  const int64_t istride = IdStride(ds(), false);
  const int64_t astride = IdStride(ds(), true);
  const size_t n = ds().images.size(), m = ds().annotations.size();
  ASSERT_EQ(r.dataset.annotations.size(), 2 * m);
  EXPECT_EQ(r.dataset.images[0].file_name, ds().images[0].file_name);
  EXPECT_EQ(r.dataset.images[n].file_name, "img_00001_c1.png");
  EXPECT_EQ(r.dataset.images[n].id, ds().images[0].id + istride);
  std::set<int64_t> ids;
  for (const auto& img : r.dataset.images) ids.insert(img.id);
  EXPECT_EQ(ids.size(), 2 * n);
  for (size_t k = 0; k < m; ++k) {
    const Annotation& src = ds().annotations[k];
    const Annotation& dup = r.dataset.annotations[m + k];
    EXPECT_EQ(dup.id, src.id + astride);
    EXPECT_EQ(dup.image_id, src.image_id + istride);
    EXPECT_EQ(dup.bbox, src.bbox);
    EXPECT_EQ(dup.mask, src.mask);
    // Only the two id fields may differ in the serialized label.
    nlohmann::json a = AnnotationToJson(dup), b = AnnotationToJson(src);
    a.erase("id");
    a.erase("image_id");
    b.erase("id");
    b.erase("image_id");
    EXPECT_EQ(a.dump(), b.dump());
  }
}

TEST_F(AugmentTest, IncludeOriginalsKeepsSlotZero) {
  AugmentConfig cfg = Config(Method::kRandomErasure);
  cfg.include_originals = true;
  const AugmentResult r = AugmentDataset(ds(), cfg);
  const size_t n = ds().images.size();
  ASSERT_EQ(r.dataset.images.size(), 2 * n);
  for (size_t i = 0; i < n; ++i) {
    EXPECT_EQ(r.dataset.images[i].raster, ds().images[i].raster);
    EXPECT_EQ(r.dataset.images[i].id, ds().images[i].id);
  }
  EXPECT_NE(r.dataset.images[n].raster, ds().images[0].raster);
  EXPECT_EQ(r.dataset.images[n].file_name, "img_00001_c1.png");
}

TEST(AugmentFallbackTest, FullMaskInsertsRawPatch) {
  ImageRaster raster(16, 16, 8, 100);
  Annotation ann;
  ann.id = 1;
  ann.image_id = 1;
  ann.bbox = {4, 4, 8, 8};
  ann.mask = InstanceMask(16, 16);
  for (int y = 4; y < 12; ++y) {
    for (int x = 4; x < 12; ++x) ann.mask.at(x, y) = 1;
  }
  const std::vector<ImageRaster> pool{ImageRaster(32, 32, 8, 7)};
  Rng rng(1);
  const auto rec = AugmentInstance(raster, ann, Config(Method::kContextPreserving), pool, rng);
  ASSERT_TRUE(rec.has_value());
  EXPECT_TRUE(rec->fallback);
  const BoundingBox abs = rec->AbsoluteRect();
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      const bool in = x >= abs.x && x < abs.x + abs.w && y >= abs.y && y < abs.y + abs.h;
      EXPECT_EQ(raster.at(x, y), in ? 7 : 100);
    }
  }
}

TEST_F(AugmentTest, ReportJsonRoundTrip) {
  AugmentConfig cfg = Config(Method::kContextPreserving);
  cfg.copies = 2;
  const AugmentResult r = AugmentDataset(ds(), cfg);
  const nlohmann::json j = r.report.ToJson(cfg);
  const AugmentReport back = AugmentReport::FromJson(j);
  EXPECT_EQ(back.records, r.report.records);
  EXPECT_EQ(j.at("area_ratio_range").at(0).get<double>(), 0.2);
}

}  // namespace
}  // namespace shadowsmith
