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
#ifndef SHADOWSMITH_DATASET_H_
#define SHADOWSMITH_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "shadowsmith/image.h"

namespace shadowsmith {

// One ship instance: box b_n and full-image mask M_n.
struct Annotation {
  int64_t id = 0;
  int64_t image_id = 0;
  BoundingBox bbox;
  InstanceMask mask;
  // The annotation object as read from disk. Written back verbatim (with id
  // and image_id refreshed) so labels survive a load/write cycle untouched.
  // Null for annotations built in memory.
  nlohmann::json raw;
};

struct ImageRecord {
  int64_t id = 0;
  std::string file_name;
  ImageRaster raster;
  nlohmann::json raw;

  int width() const { return raster.width(); }
  int height() const { return raster.height(); }
};

struct Dataset {
  std::vector<ImageRecord> images;
  std::vector<Annotation> annotations;
  // Ship-free images that noise patches are drawn from.
  std::vector<ImageRaster> background_pool;
  // Top-level COCO fields other than images/annotations (info, categories,
  // licenses, ...), passed through on write.
  nlohmann::json extra = nlohmann::json::object();

  const ImageRecord* FindImage(int64_t id) const;
  // Indices into `annotations` belonging to image_id, in file order.
  std::vector<size_t> AnnotationsOf(int64_t image_id) const;
};

// Loads a COCO-style annotation file and the grayscale images it references.
// Errors: IoError for missing files, DecodeError for malformed JSON (message
// carries the byte offset) or undecodable images/masks, ValidationError for
// boxes outside their image (message names the annotation id).
Dataset LoadDataset(const std::filesystem::path& annotations_path,
                    const std::filesystem::path& images_dir);

// Loads the on-disk layout <root>/annotations.json, <root>/images/ and, when
// present, <root>/backgrounds/.
Dataset LoadDatasetDir(const std::filesystem::path& root);

// All PNG files of a directory in file-name order.
std::vector<ImageRaster> LoadBackgroundPool(const std::filesystem::path& dir);

// Checks every Dataset invariant; throws ValidationError.
void ValidateDataset(const Dataset& dataset);

nlohmann::json AnnotationToJson(const Annotation& ann);
nlohmann::json DatasetToJson(const Dataset& dataset);
void WriteAnnotations(const Dataset& dataset,
                      const std::filesystem::path& path);

// Writes the annotations file and every image under <root>/images/.
// Background pool images are written to <root>/backgrounds/ when requested.
void WriteDatasetDir(const Dataset& dataset, const std::filesystem::path& root,
                     bool write_backgrounds = false);

enum class SizeClass { kSmall, kMedium, kLarge };

// COCO object size classes by box area: small < 32^2 <= medium < 96^2 <= large.
SizeClass ClassifySize(const BoundingBox& bbox);
const char* SizeClassName(SizeClass c);

// Rounds half-up; used for COCO float boxes.
int RoundHalfUp(double v);

}  // namespace shadowsmith

#endif  // SHADOWSMITH_DATASET_H_
