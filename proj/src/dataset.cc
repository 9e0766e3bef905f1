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
#include "shadowsmith/dataset.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "shadowsmith/mask_codec.h"
#include "shadowsmith/png_io.h"

namespace shadowsmith {

namespace fs = std::filesystem;
using nlohmann::json;

SizeClass ClassifySize(const BoundingBox& bbox) {
  const int64_t area = bbox.area();
  if (area < 32 * 32) return SizeClass::kSmall;
  if (area < 96 * 96) return SizeClass::kMedium;
  return SizeClass::kLarge;
}

const char* SizeClassName(SizeClass c) {
  switch (c) {
    case SizeClass::kSmall:
      return "small";
    case SizeClass::kMedium:
      return "medium";
    case SizeClass::kLarge:
      return "large";
  }
  return "";
}

int RoundHalfUp(double v) { return static_cast<int>(std::floor(v + 0.5)); }

const ImageRecord* Dataset::FindImage(int64_t id) const {
  for (const auto& img : images) {
    if (img.id == id) return &img;
  }
  return nullptr;
}

std::vector<size_t> Dataset::AnnotationsOf(int64_t image_id) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < annotations.size(); ++i) {
    if (annotations[i].image_id == image_id) out.push_back(i);
  }
  return out;
}

namespace {

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open annotation file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const json& Field(const json& obj, const char* key, const std::string& what) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw DecodeError(what + " is missing field '" + key + "'");
  }
  return obj.at(key);
}

BoundingBox ParseBox(const json& j, int64_t ann_id) {
  if (!j.is_array() || j.size() != 4) {
    throw DecodeError("annotation " + std::to_string(ann_id) +
                      ": bbox must be [x, y, w, h]");
  }
  BoundingBox b;
  b.x = RoundHalfUp(j[0].get<double>());
  b.y = RoundHalfUp(j[1].get<double>());
  b.w = RoundHalfUp(j[2].get<double>());
  b.h = RoundHalfUp(j[3].get<double>());
  return b;
}

void CheckAnnotation(const Annotation& ann, const ImageRecord& img) {
  const std::string tag = "annotation " + std::to_string(ann.id);
  if (!ann.bbox.FitsIn(img.width(), img.height())) {
    throw ValidationError(tag + ": bbox [" + std::to_string(ann.bbox.x) + "," +
                          std::to_string(ann.bbox.y) + "," +
                          std::to_string(ann.bbox.w) + "," +
                          std::to_string(ann.bbox.h) +
                          "] lies outside image " + std::to_string(img.id) +
                          " (" + std::to_string(img.width()) + "x" +
                          std::to_string(img.height()) + ")");
  }
  if (ann.mask.width() != img.width() || ann.mask.height() != img.height()) {
    throw ValidationError(tag + ": mask size differs from its image");
  }
  bool any = false;
  for (int y = ann.bbox.y; y < ann.bbox.y + ann.bbox.h && !any; ++y) {
    for (int x = ann.bbox.x; x < ann.bbox.x + ann.bbox.w; ++x) {
      if (ann.mask.at(x, y) != 0) {
        any = true;
        break;
      }
    }
  }
  if (!any) {
    throw ValidationError(tag + ": mask has no target pixel inside its bbox");
  }
}

}  // namespace

void ValidateDataset(const Dataset& dataset) {
  std::unordered_set<int64_t> image_ids;
  for (const auto& img : dataset.images) {
    if (!image_ids.insert(img.id).second) {
      throw ValidationError("duplicate image id " + std::to_string(img.id));
    }
  }
  std::unordered_set<int64_t> ann_ids;
  for (const auto& ann : dataset.annotations) {
    if (!ann_ids.insert(ann.id).second) {
      throw ValidationError("duplicate annotation id " + std::to_string(ann.id));
    }
    const ImageRecord* img = dataset.FindImage(ann.image_id);
    if (img == nullptr) {
      throw ValidationError("annotation " + std::to_string(ann.id) +
                            " references unknown image " +
                            std::to_string(ann.image_id));
    }
    CheckAnnotation(ann, *img);
  }
}

Dataset LoadDataset(const fs::path& annotations_path,
                    const fs::path& images_dir) {
  const std::string text = ReadFile(annotations_path);
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DecodeError("malformed JSON in " + annotations_path.string() +
                      " at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!root.is_object()) {
    throw DecodeError(annotations_path.string() + ": top level must be an object");
  }

  Dataset ds;
  for (auto it = root.begin(); it != root.end(); ++it) {
    if (it.key() != "images" && it.key() != "annotations") {
      ds.extra[it.key()] = it.value();
    }
  }

  try {
    for (const auto& j : Field(root, "images", "annotation file")) {
      ImageRecord rec;
      rec.id = Field(j, "id", "image record").get<int64_t>();
      rec.file_name = Field(j, "file_name", "image record").get<std::string>();
      const fs::path file = images_dir / rec.file_name;
      if (!fs::exists(file)) {
        throw IoError("missing image file: " + file.string());
      }
      rec.raster = ReadRaster(file);
      if (j.contains("width") && j.contains("height") &&
          (j.at("width").get<int>() != rec.raster.width() ||
           j.at("height").get<int>() != rec.raster.height())) {
        throw ValidationError("image " + std::to_string(rec.id) + " (" +
                              rec.file_name +
                              "): recorded size differs from the file");
      }
      rec.raw = j;
      ds.images.push_back(std::move(rec));
    }

    const json empty = json::array();
    const json& anns = root.contains("annotations") ? root.at("annotations") : empty;
    for (const auto& j : anns) {
      Annotation ann;
      ann.id = Field(j, "id", "annotation").get<int64_t>();
      ann.image_id = Field(j, "image_id", "annotation").get<int64_t>();
      ann.bbox = ParseBox(Field(j, "bbox", "annotation"), ann.id);
      const ImageRecord* img = ds.FindImage(ann.image_id);
      if (img == nullptr) {
        throw ValidationError("annotation " + std::to_string(ann.id) +
                              " references unknown image " +
                              std::to_string(ann.image_id));
      }
      if (!ann.bbox.FitsIn(img->width(), img->height())) {
        CheckAnnotation(ann, *img);  // throws with the box details
      }
      try {
        ann.mask = DecodeSegmentation(Field(j, "segmentation", "annotation"),
                                      img->width(), img->height());
      } catch (const DecodeError& e) {
        throw DecodeError("annotation " + std::to_string(ann.id) + ": " +
                          e.what());
      }
      ann.raw = j;
      ds.annotations.push_back(std::move(ann));
    }
  } catch (const json::exception& e) {
    throw DecodeError(annotations_path.string() + ": " + e.what());
  }

  ValidateDataset(ds);
  return ds;
}

std::vector<ImageRaster> LoadBackgroundPool(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw IoError("background directory not found: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<ImageRaster> pool;
  pool.reserve(files.size());
  for (const auto& f : files) pool.push_back(ReadRaster(f));
  return pool;
}

Dataset LoadDatasetDir(const fs::path& root) {
  Dataset ds = LoadDataset(root / "annotations.json", root / "images");
  if (fs::is_directory(root / "backgrounds")) {
    ds.background_pool = LoadBackgroundPool(root / "backgrounds");
  }
  return ds;
}

json AnnotationToJson(const Annotation& ann) {
  json j;
  if (ann.raw.is_object()) {
    j = ann.raw;
  } else {
    j["area"] = std::count(ann.mask.data().begin(), ann.mask.data().end(), 1);
    j["bbox"] = {ann.bbox.x, ann.bbox.y, ann.bbox.w, ann.bbox.h};
    j["category_id"] = 1;
    j["iscrowd"] = 0;
    j["segmentation"] = {{"counts", EncodeRle(ann.mask)},
                         {"size", {ann.mask.height(), ann.mask.width()}}};
  }
  j["id"] = ann.id;
  j["image_id"] = ann.image_id;
  return j;
}

json DatasetToJson(const Dataset& dataset) {
  json root = dataset.extra.is_object() ? dataset.extra : json::object();
  if (!root.contains("categories")) {
    root["categories"] = json::array({{{"id", 1}, {"name", "ship"}}});
  }
  json images = json::array();
  for (const auto& img : dataset.images) {
    json j = img.raw.is_object() ? img.raw : json::object();
    j["id"] = img.id;
    j["file_name"] = img.file_name;
    j["width"] = img.width();
    j["height"] = img.height();
    images.push_back(std::move(j));
  }
  json anns = json::array();
  for (const auto& ann : dataset.annotations) anns.push_back(AnnotationToJson(ann));
  root["images"] = std::move(images);
  root["annotations"] = std::move(anns);
  return root;
}

void WriteAnnotations(const Dataset& dataset, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path.string());
  out << DatasetToJson(dataset).dump(1) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

void WriteDatasetDir(const Dataset& dataset, const fs::path& root,
                     bool write_backgrounds) {
  std::error_code ec;
  fs::create_directories(root / "images", ec);
  if (ec) throw IoError("cannot create " + (root / "images").string() + ": " + ec.message());
  for (const auto& img : dataset.images) {
    const fs::path file = root / "images" / img.file_name;
    fs::create_directories(file.parent_path(), ec);
    WriteRaster(img.raster, file);
  }
  WriteAnnotations(dataset, root / "annotations.json");
  if (write_backgrounds && !dataset.background_pool.empty()) {
    fs::create_directories(root / "backgrounds", ec);
    if (ec) throw IoError("cannot create " + (root / "backgrounds").string());
    for (size_t i = 0; i < dataset.background_pool.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "bg_%04zu.png", i);
      WriteRaster(dataset.background_pool[i], root / "backgrounds" / name);
    }
  }
}

}  // namespace shadowsmith
