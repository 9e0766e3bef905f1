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
#ifndef SHADOWSMITH_AUGMENT_H_
#define SHADOWSMITH_AUGMENT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "shadowsmith/dataset.h"
#include "shadowsmith/random.h"
#include "shadowsmith/rect_sampler.h"

namespace shadowsmith {

enum class Method {
  kContextPreserving,  // histogram-matched background patch (cpil)
  kRandomErasure,      // per-pixel uniform random levels (re)
  kDirectInsertion,    // raw background patch (dbi)
  kNone,
};

// "cpil", "re", "dbi", "none". ParseMethod throws ConfigError.
Method ParseMethod(std::string_view name);
const char* MethodName(Method method);

struct AugmentConfig {
  Method method = Method::kContextPreserving;
  Range area_range = kDefaultAreaRatioRange;
  Range aspect_range = kDefaultAspectRatioRange;
  double apply_prob = 1.0;
  int copies = 1;
  uint64_t seed = 0;
  int workers = 1;
  bool include_originals = false;
  int max_retries = kDefaultMaxRetries;

  // Throws ConfigError.
  void Validate() const;
};

struct InstanceRecord {
  int copy = 0;
  int64_t image_id = 0;         // source image
  int64_t output_image_id = 0;  // image in the augmented dataset
  int64_t annotation_id = 0;    // source annotation
  Method method = Method::kNone;
  BoundingBox bbox;
  Rect rect;  // relative to bbox
  double area_ratio = 0.0;
  double aspect_ratio = 0.0;
  bool clamped = false;
  // Context set was empty, so the raw patch was inserted unmatched.
  bool fallback = false;

  BoundingBox AbsoluteRect() const {
    return {bbox.x + rect.x, bbox.y + rect.y, rect.w, rect.h};
  }
  bool operator==(const InstanceRecord&) const = default;
};

struct AugmentReport {
  std::vector<InstanceRecord> records;
  int64_t images_written = 0;
  int64_t instances_seen = 0;
  int64_t clamped = 0;
  int64_t fallbacks = 0;

  nlohmann::json ToJson(const AugmentConfig& cfg) const;
  static AugmentReport FromJson(const nlohmann::json& j);
};

// Augments one instance in place. Returns the record when augmentation was
// applied, nullopt for Method::kNone or when the apply_prob draw fails.
// Pixels outside the sampled rect are never written. For the
// context-preserving method the context set is read from `raster` as it is
// at call time.
std::optional<InstanceRecord> AugmentInstance(
    ImageRaster& raster, const Annotation& ann, const AugmentConfig& cfg,
    std::span<const ImageRaster> background_pool, Rng& rng);

struct AugmentResult {
  Dataset dataset;
  AugmentReport report;
};

// Runs the configured method over every instance of every image, `copies`
// times. Each (copy, image) pair owns a random stream seeded from
// (seed, copy, image_id), so results do not depend on `workers`.
// Annotations are copied unchanged. Output slot 0 keeps the source ids and
// file names; later slots (further copies, or all copies when originals are
// included first) shift ids by a fixed stride and suffix file names with
// "_c<slot>".
AugmentResult AugmentDataset(const Dataset& dataset, const AugmentConfig& cfg);

// Image/annotation id stride used for slot renumbering.
int64_t IdStride(const Dataset& dataset, bool annotations);

}  // namespace shadowsmith

#endif  // SHADOWSMITH_AUGMENT_H_
