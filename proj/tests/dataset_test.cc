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
#include <png.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>

#include "gtest/gtest.h"
#include "shadowsmith/dataset.h"
#include "shadowsmith/mask_codec.h"
#include "shadowsmith/png_io.h"
#include "test_util.h"

namespace shadowsmith {
namespace {

using nlohmann::json;
using testing::RampRaster;
using testing::TempDir;

int CountOnes(const InstanceMask& m) {
  int n = 0;
  for (uint8_t v : m.data()) n += v;
  return n;
}

void WriteText(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

TEST(DecodeMaskTest, RleSingleOneRunCoversGrid) {
  const InstanceMask m = DecodeRle({0, 4}, 2, 2);
  EXPECT_EQ(CountOnes(m), 4);
}

TEST(DecodeMaskTest, RleSingleZeroRun) {
  const InstanceMask m = DecodeRle({4}, 2, 2);
  EXPECT_EQ(CountOnes(m), 0);
}

TEST(DecodeMaskTest, RleIsColumnMajor) {
  // 3 wide x 2 high; runs: 2 zeros (column 0), 2 ones (column 1), 2 zeros.
  const InstanceMask m = DecodeRle({2, 2, 2}, 3, 2);
  EXPECT_EQ(m.at(1, 0), 1);
  EXPECT_EQ(m.at(1, 1), 1);
  EXPECT_EQ(m.at(0, 0), 0);
  EXPECT_EQ(m.at(2, 1), 0);
}

TEST(DecodeMaskTest, RleSumMismatchIsDecodeError) {
  EXPECT_THROW(DecodeRle({1, 2}, 2, 2), DecodeError);
  EXPECT_THROW(DecodeRle({0, 5}, 2, 2), DecodeError);
}

TEST(DecodeMaskTest, SquarePolygonMatchesPixelCenterEnumeration) {
  const InstanceMask m =
      DecodePolygons({{0.0, 0.0, 3.0, 0.0, 3.0, 3.0, 0.0, 3.0}}, 4, 4);
  // Oracle: a pixel is inside the closed square iff its center is.
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      const double cx = x + 0.5, cy = y + 0.5;
      const bool inside = cx >= 0 && cx <= 3 && cy >= 0 && cy <= 3;
      EXPECT_EQ(m.at(x, y), inside ? 1 : 0) << x << "," << y;
    }
  }
  EXPECT_EQ(CountOnes(m), 9);
}

TEST(DecodeMaskTest, CenterOnEdgeCountsInside) {
  // Right edge at x = 2.5 passes through the centers of column 2.
  const InstanceMask m =
      DecodePolygons({{0.0, 0.0, 2.5, 0.0, 2.5, 4.0, 0.0, 4.0}}, 4, 4);
  for (int y = 0; y < 4; ++y) EXPECT_EQ(m.at(2, y), 1);
  for (int y = 0; y < 4; ++y) EXPECT_EQ(m.at(3, y), 0);
}

TEST(DecodeMaskTest, TriangleEvenOdd) {
  const InstanceMask m = DecodePolygons({{0, 0, 8, 0, 0, 8}}, 8, 8);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      const bool inside = (x + 0.5) + (y + 0.5) <= 8.0;
      EXPECT_EQ(m.at(x, y), inside ? 1 : 0);
    }
  }
}

TEST(DecodeMaskTest, TooFewVerticesIsDecodeError) {
  EXPECT_THROW(DecodePolygons({{0, 0, 1, 1}}, 4, 4), DecodeError);
}

TEST(DecodeMaskTest, RleRoundTripProperty) {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = 1 + static_cast<int>(gen() % 17);
    const int h = 1 + static_cast<int>(gen() % 17);
    InstanceMask m(w, h);
    for (auto& v : m.data()) v = gen() % 3 == 0;
    const auto counts = EncodeRle(m);
    EXPECT_EQ(DecodeRle(counts, w, h), m);
    EXPECT_EQ(RleCountsFromString(RleCountsToString(counts)), counts);
  }
}

TEST(DecodeMaskTest, CompressedRleStringKnownValue) {
  // pycocotools encodes counts [0, 4] as "04".
  EXPECT_EQ(RleCountsToString({0, 4}), "04");
  EXPECT_EQ(RleCountsFromString("04"), (std::vector<uint32_t>{0, 4}));
}

TEST(DecodeMaskTest, PolygonAndRleAgreeOnRectangles) {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int W = 64, H = 48;
    const int x0 = static_cast<int>(gen() % 30), y0 = static_cast<int>(gen() % 20);
    const int w = 4 + static_cast<int>(gen() % 30), h = 4 + static_cast<int>(gen() % 25);
    InstanceMask truth(W, H);
    for (int y = y0; y < y0 + h; ++y) {
      for (int x = x0; x < x0 + w; ++x) truth.at(x, y) = 1;
    }
    const InstanceMask rle = DecodeRle(EncodeRle(truth), W, H);
    const double fx0 = x0, fy0 = y0, fx1 = x0 + w, fy1 = y0 + h;
    const InstanceMask poly =
        DecodePolygons({{fx0, fy0, fx1, fy0, fx1, fy1, fx0, fy1}}, W, H);
    int agree = 0;
    for (size_t i = 0; i < rle.size(); ++i) agree += rle.data()[i] == poly.data()[i];
    EXPECT_GE(agree, 0.99 * W * H);
  }
}

TEST(DecodeMaskTest, SegmentationSizeMismatch) {
  const json seg = {{"size", {3, 2}}, {"counts", {0, 4}}};
  EXPECT_THROW(DecodeSegmentation(seg, 2, 2), DecodeError);
}

TEST(CropSubImageTest, RampWindow) {
  const ImageRaster r = RampRaster(4, 4);
  const SubImage s = CropSubImage(r, {1, 1, 2, 2});
  // value = row * 4 + col over rows 1..2 and cols 1..2.
  std::vector<uint16_t> expected;
  for (int row = 1; row <= 2; ++row) {
    for (int col = 1; col <= 2; ++col) expected.push_back(static_cast<uint16_t>(row * 4 + col));
  }
  EXPECT_EQ(s.values(), expected);
  EXPECT_EQ(s.values(), (std::vector<uint16_t>{5, 6, 9, 10}));
}

TEST(CropSubImageTest, FullAndSinglePixel) {
  const ImageRaster r = RampRaster(4, 4);
  EXPECT_EQ(CropSubImage(r, {0, 0, 4, 4}), r.pixels());
  const SubImage one = CropSubImage(r, {0, 0, 1, 1});
  EXPECT_EQ(one.values(), std::vector<uint16_t>{0});
}

TEST(CropSubImageTest, CopyIsIndependent) {
  ImageRaster r = RampRaster(4, 4);
  SubImage s = CropSubImage(r, {0, 0, 2, 2});
  s.at(0, 0) = 99;
  EXPECT_EQ(r.at(0, 0), 0);
}

TEST(CropSubImageTest, OutOfBoundsIsContractError) {
  EXPECT_THROW(CropSubImage(RampRaster(4, 4), {3, 3, 2, 2}), ContractError);
}

TEST(PngIoTest, RoundTripEightBit) {
  TempDir dir("png8");
  std::mt19937 gen(1);
  ImageRaster r(16, 16, 8);
  for (auto& v : r.data()) v = static_cast<uint16_t>(gen() % 256);
  WriteRaster(r, dir / "a.png");
  EXPECT_EQ(ReadRaster(dir / "a.png"), r);
}

TEST(PngIoTest, RoundTripSixteenBit) {
  TempDir dir("png16");
  std::mt19937 gen(2);
  ImageRaster r(13, 7, 16);
  for (auto& v : r.data()) v = static_cast<uint16_t>(gen() % 65536);
  WriteRaster(r, dir / "a.png");
  const ImageRaster back = ReadRaster(dir / "a.png");
  EXPECT_EQ(back.depth(), 16);
  EXPECT_EQ(back, r);
}

TEST(PngIoTest, RejectsColorImages) {
  TempDir dir("pngrgb");
  const auto path = dir / "rgb.png";
  std::FILE* f = std::fopen(path.c_str(), "wb");
  ASSERT_NE(f, nullptr);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_init_io(png, f);
  png_set_IHDR(png, info, 2, 2, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_byte row[6] = {1, 2, 3, 4, 5, 6};
  png_write_row(png, row);
  png_write_row(png, row);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(f);
  EXPECT_THROW(ReadRaster(path), DecodeError);
}

TEST(PngIoTest, MissingFileIsIoError) {
  EXPECT_THROW(ReadRaster("/nonexistent/shadowsmith.png"), IoError);
}

class LoadDatasetTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::filesystem::create_directories(dir_ / "images");
    WriteRaster(RampRaster(4, 4), dir_ / "images" / "a.png");
  }
  Dataset Load(const json& j) {
    WriteText(dir_ / "ann.json", j.dump());
    return LoadDataset(dir_ / "ann.json", dir_ / "images");
  }
  static json Minimal() {
    return {{"images", {{{"id", 1}, {"file_name", "a.png"}, {"width", 4}, {"height", 4}}}},
            {"annotations",
             {{{"id", 7},
               {"image_id", 1},
               {"bbox", {0, 0, 2, 2}},
               {"segmentation", {{0.0, 0.0, 2.0, 0.0, 2.0, 2.0, 0.0, 2.0}}}}}},
            {"categories", {{{"id", 1}, {"name", "ship"}}}}};
  }
  TempDir dir_{"load"};
};

TEST_F(LoadDatasetTest, MinimalPolygonDataset) {
  const Dataset ds = Load(Minimal());
  ASSERT_EQ(ds.images.size(), 1u);
  ASSERT_EQ(ds.annotations.size(), 1u);
  const Annotation& a = ds.annotations[0];
  EXPECT_EQ(a.bbox, (BoundingBox{0, 0, 2, 2}));
  EXPECT_EQ(a.mask.width(), 4);
  EXPECT_EQ(CountOnes(a.mask), 4);
  EXPECT_EQ(ds.images[0].raster, RampRaster(4, 4));
  EXPECT_TRUE(ds.extra.contains("categories"));
}

TEST_F(LoadDatasetTest, BoxOutsideImageNamesAnnotation) {
  json j = Minimal();
  j["annotations"][0]["bbox"] = {3, 0, 2, 2};
  try {
    Load(j);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("annotation 7"), std::string::npos) << e.what();
  }
}

TEST_F(LoadDatasetTest, FloatBoxesRoundHalfUp) {
  json j = Minimal();
  j["annotations"][0]["bbox"] = {0.4, 0.5, 1.5, 2.49};
  const Dataset ds = Load(j);
  EXPECT_EQ(ds.annotations[0].bbox, (BoundingBox{0, 1, 2, 2}));
}

TEST_F(LoadDatasetTest, EmptyMaskInsideBoxIsRejected) {
  json j = Minimal();
  j["annotations"][0]["bbox"] = {2, 2, 2, 2};
  EXPECT_THROW(Load(j), ValidationError);
}

TEST_F(LoadDatasetTest, MalformedJsonReportsByteOffset) {
  WriteText(dir_ / "ann.json", "{\"images\": [}");
  try {
    LoadDataset(dir_ / "ann.json", dir_ / "images");
    FAIL() << "expected DecodeError";
  } catch (const DecodeError& e) {
    EXPECT_NE(std::string(e.what()).find("at byte 13"), std::string::npos) << e.what();
  }
}

TEST_F(LoadDatasetTest, MissingImageFileIsNamed) {
  json j = Minimal();
  j["images"][0]["file_name"] = "missing.png";
  try {
    Load(j);
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("missing.png"), std::string::npos);
  }
}

TEST_F(LoadDatasetTest, DuplicateAnnotationIds) {
  json j = Minimal();
  j["annotations"].push_back(j["annotations"][0]);
  EXPECT_THROW(Load(j), ValidationError);
}

TEST_F(LoadDatasetTest, WriteThenLoadPreservesAnnotationsVerbatim) {
  json j = Minimal();
  j["annotations"][0]["extra_field"] = "kept";
  const Dataset ds = Load(j);
  TempDir out("roundtrip");
  WriteDatasetDir(ds, out.path());
  const Dataset back = LoadDatasetDir(out.path());
  ASSERT_EQ(back.annotations.size(), 1u);
  EXPECT_EQ(back.annotations[0].raw.dump(), ds.annotations[0].raw.dump());
  EXPECT_EQ(back.annotations[0].mask, ds.annotations[0].mask);
  EXPECT_EQ(back.images[0].raster, ds.images[0].raster);
}

TEST(DatasetTest, InMemoryAnnotationsRoundTripThroughRle) {
  Dataset ds;
  ImageRecord img;
  img.id = 3;
  img.file_name = "x.png";
  img.raster = RampRaster(6, 5, 16);
  ds.images.push_back(img);
  Annotation a;
  a.id = 9;
  a.image_id = 3;
  a.bbox = {1, 1, 3, 2};
  a.mask = InstanceMask(6, 5);
  a.mask.at(1, 1) = a.mask.at(3, 2) = 1;
  ds.annotations.push_back(a);
  TempDir out("mem");
  WriteDatasetDir(ds, out.path());
  const Dataset back = LoadDatasetDir(out.path());
  EXPECT_EQ(back.annotations[0].bbox, a.bbox);
  EXPECT_EQ(back.annotations[0].mask, a.mask);
  EXPECT_EQ(back.images[0].raster, img.raster);
}

TEST(SizeClassTest, CocoThresholds) {
  EXPECT_EQ(ClassifySize({0, 0, 30, 30}), SizeClass::kSmall);
  EXPECT_EQ(ClassifySize({0, 0, 50, 50}), SizeClass::kMedium);
  EXPECT_EQ(ClassifySize({0, 0, 100, 100}), SizeClass::kLarge);
  EXPECT_EQ(ClassifySize({0, 0, 32, 32}), SizeClass::kMedium);
  EXPECT_EQ(ClassifySize({0, 0, 96, 96}), SizeClass::kLarge);
}

// Runs only when HRSID_ROOT points at an HRSID copy with
// annotations/train2017.json and images/.
TEST(HrsidTest, TrainSplitCounts) {
  const char* root = std::getenv("HRSID_ROOT");
  if (root == nullptr) GTEST_SKIP() << "HRSID_ROOT not set";
  const std::filesystem::path base(root);
  const Dataset ds = LoadDataset(base / "annotations" / "train2017.json", base / "images");
  EXPECT_EQ(ds.images.size(), 3642u);
  EXPECT_EQ(ds.annotations.size(), 11047u);
}

}  // namespace
}  // namespace shadowsmith
