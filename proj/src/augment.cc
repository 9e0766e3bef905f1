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

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <mutex>
#include <thread>

#include "shadowsmith/context_match.h"
#include "shadowsmith/log.h"

namespace shadowsmith {

using nlohmann::json;

Method ParseMethod(std::string_view name) {
  if (name == "cpil") return Method::kContextPreserving;
  if (name == "re") return Method::kRandomErasure;
  if (name == "dbi") return Method::kDirectInsertion;
  if (name == "none") return Method::kNone;
  throw ConfigError("unknown augmentation method '" + std::string(name) +
                    "' (expected cpil, re, dbi or none)");
}

const char* MethodName(Method method) {
  switch (method) {
    case Method::kContextPreserving:
      return "cpil";
    case Method::kRandomErasure:
      return "re";
    case Method::kDirectInsertion:
      return "dbi";
    case Method::kNone:
      return "none";
  }
  return "none";
}

void AugmentConfig::Validate() const {
  ValidateRange(area_range, "area ratio");
  ValidateRange(aspect_range, "aspect ratio");
  if (area_range.hi >= 1.0) {
    throw ConfigError("area ratio must stay below 1");
  }
  if (!(apply_prob >= 0.0 && apply_prob <= 1.0)) {
    throw ConfigError("apply probability must lie in [0, 1]");
  }
  if (copies < 1) throw ConfigError("copies must be at least 1");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (max_retries < 0) throw ConfigError("max retries must be non-negative");
}

namespace {

json RectJson(int x, int y, int w, int h) { return json::array({x, y, w, h}); }

void InsertPatch(ImageRaster& raster, const BoundingBox& bbox, const Rect& r,
                 const SubImage& patch) {
  for (int y = 0; y < r.h; ++y) {
    for (int x = 0; x < r.w; ++x) {
      raster.at(bbox.x + r.x + x, bbox.y + r.y + y) = patch.at(x, y);
    }
  }
}

}  // namespace

json AugmentReport::ToJson(const AugmentConfig& cfg) const {
  json j;
  j["method"] = MethodName(cfg.method);
  j["seed"] = cfg.seed;
  j["copies"] = cfg.copies;
  j["apply_prob"] = cfg.apply_prob;
  j["area_ratio_range"] = {cfg.area_range.lo, cfg.area_range.hi};
  j["aspect_ratio_range"] = {cfg.aspect_range.lo, cfg.aspect_range.hi};
  j["include_originals"] = cfg.include_originals;
  j["max_retries"] = cfg.max_retries;
  j["summary"] = {{"images_written", images_written},
                  {"instances_seen", instances_seen},
                  {"instances_augmented", static_cast<int64_t>(records.size())},
                  {"clamped", clamped},
                  {"fallbacks", fallbacks}};
  json recs = json::array();
  for (const auto& r : records) {
    const BoundingBox abs = r.AbsoluteRect();
    recs.push_back({{"copy", r.copy},
                    {"image_id", r.image_id},
                    {"output_image_id", r.output_image_id},
                    {"annotation_id", r.annotation_id},
                    {"method", MethodName(r.method)},
                    {"bbox", RectJson(r.bbox.x, r.bbox.y, r.bbox.w, r.bbox.h)},
                    {"rect", RectJson(r.rect.x, r.rect.y, r.rect.w, r.rect.h)},
                    {"rect_abs", RectJson(abs.x, abs.y, abs.w, abs.h)},
                    {"area_ratio", r.area_ratio},
                    {"aspect_ratio", r.aspect_ratio},
                    {"clamped", r.clamped},
                    {"fallback", r.fallback}});
  }
  j["records"] = std::move(recs);
  return j;
}

AugmentReport AugmentReport::FromJson(const json& j) {
  AugmentReport rep;
  try {
    const auto& s = j.at("summary");
    rep.images_written = s.at("images_written").get<int64_t>();
    rep.instances_seen = s.at("instances_seen").get<int64_t>();
    rep.clamped = s.at("clamped").get<int64_t>();
    rep.fallbacks = s.at("fallbacks").get<int64_t>();
    for (const auto& r : j.at("records")) {
      InstanceRecord rec;
      rec.copy = r.at("copy").get<int>();
      rec.image_id = r.at("image_id").get<int64_t>();
      rec.output_image_id = r.at("output_image_id").get<int64_t>();
      rec.annotation_id = r.at("annotation_id").get<int64_t>();
      rec.method = ParseMethod(r.at("method").get<std::string>());
      const auto& b = r.at("bbox");
      rec.bbox = {b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()};
      const auto& q = r.at("rect");
      rec.rect = {q[0].get<int>(), q[1].get<int>(), q[2].get<int>(), q[3].get<int>()};
      rec.area_ratio = r.at("area_ratio").get<double>();
      rec.aspect_ratio = r.at("aspect_ratio").get<double>();
      rec.clamped = r.at("clamped").get<bool>();
      rec.fallback = r.at("fallback").get<bool>();
      rep.records.push_back(rec);
    }
  } catch (const json::exception& e) {
    throw DecodeError(std::string("malformed augmentation report: ") + e.what());
  }
  return rep;
}

std::optional<InstanceRecord> AugmentInstance(
    ImageRaster& raster, const Annotation& ann, const AugmentConfig& cfg,
    std::span<const ImageRaster> background_pool, Rng& rng) {
  if (cfg.method == Method::kNone) return std::nullopt;
  if (!ann.bbox.FitsIn(raster.width(), raster.height())) {
    throw ContractError("annotation " + std::to_string(ann.id) +
                        " does not fit its raster");
  }
  if (!rng.Bernoulli(cfg.apply_prob)) return std::nullopt;

  const SampledRect s = SampleRect(rng, ann.bbox, cfg.area_range,
                                   cfg.aspect_range, cfg.max_retries);
  InstanceRecord rec;
  rec.image_id = ann.image_id;
  rec.annotation_id = ann.id;
  rec.method = cfg.method;
  rec.bbox = ann.bbox;
  rec.rect = s.rect;
  rec.area_ratio = s.params.area_ratio;
  rec.aspect_ratio = s.params.aspect_ratio;
  rec.clamped = s.clamped;
  if (s.clamped) {
    LogInfo("annotation " + std::to_string(ann.id) +
            ": erasure rect clamped to the bounding box");
  }

  const Rect& r = s.rect;
  switch (cfg.method) {
    case Method::kRandomErasure: {
      const int64_t top = raster.max_level();
      for (int y = 0; y < r.h; ++y) {
        for (int x = 0; x < r.w; ++x) {
          raster.at(ann.bbox.x + r.x + x, ann.bbox.y + r.y + y) =
              static_cast<uint16_t>(rng.UniformInt(0, top));
        }
      }
      break;
    }
    case Method::kDirectInsertion: {
      const SubImage patch = SampleNoisePatch(rng, background_pool, r.w, r.h);
      InsertPatch(raster, ann.bbox, r, patch);
      break;
    }
    case Method::kContextPreserving: {
      const PixelSet context =
          ContextPixels(CropSubImage(raster, ann.bbox),
                        CropMask(ann.mask, ann.bbox), raster.level_count());
      const SubImage patch = SampleNoisePatch(rng, background_pool, r.w, r.h);
      if (context.empty()) {
        rec.fallback = true;
        LogWarning("annotation " + std::to_string(ann.id) +
                   ": mask fills its bounding box, inserting unmatched patch");
        InsertPatch(raster, ann.bbox, r, patch);
      } else {
        InsertPatch(raster, ann.bbox, r,
                    MatchHistogram(patch, Histogram::Of(context)));
      }
      break;
    }
    case Method::kNone:
      break;
  }
  return rec;
}

int64_t IdStride(const Dataset& dataset, bool annotations) {
  int64_t max_id = -1;
  if (annotations) {
    for (const auto& a : dataset.annotations) max_id = std::max(max_id, a.id);
  } else {
    for (const auto& i : dataset.images) max_id = std::max(max_id, i.id);
  }
  return std::max<int64_t>(max_id + 1, 1);
}

namespace {

std::string SlotFileName(const std::string& name, int slot) {
  if (slot == 0) return name;
  std::filesystem::path p(name);
  const std::string stem = p.stem().string() + "_c" + std::to_string(slot);
  return (p.parent_path() / (stem + p.extension().string())).string();
}

struct TaskOutput {
  ImageRaster raster;
  std::vector<InstanceRecord> records;
  int64_t seen = 0;
};

}  // namespace

AugmentResult AugmentDataset(const Dataset& dataset, const AugmentConfig& cfg) {
  cfg.Validate();
  const bool needs_pool = cfg.method == Method::kContextPreserving ||
                          cfg.method == Method::kDirectInsertion;
  if (needs_pool) {
    if (dataset.background_pool.empty()) {
      throw ConfigError(std::string("method ") + MethodName(cfg.method) +
                        " needs a non-empty background pool");
    }
    for (const auto& bg : dataset.background_pool) {
      for (const auto& img : dataset.images) {
        if (bg.depth() != img.raster.depth()) {
          throw ConfigError("background pool bit depth " +
                            std::to_string(bg.depth()) +
                            " differs from image " + std::to_string(img.id) +
                            " bit depth " + std::to_string(img.raster.depth()));
        }
      }
    }
  }

  const size_t n_images = dataset.images.size();
  const int slot_offset = cfg.include_originals ? 1 : 0;
  const int64_t image_stride = IdStride(dataset, false);
  const int64_t ann_stride = IdStride(dataset, true);

  std::vector<std::vector<size_t>> per_image(n_images);
  for (size_t i = 0; i < n_images; ++i) {
    per_image[i] = dataset.AnnotationsOf(dataset.images[i].id);
    std::sort(per_image[i].begin(), per_image[i].end(), [&](size_t a, size_t b) {
      return dataset.annotations[a].id < dataset.annotations[b].id;
    });
  }

  // One task per (copy, image), indexed copy-major.
  const size_t n_tasks = static_cast<size_t>(cfg.copies) * n_images;
  std::vector<TaskOutput> outputs(n_tasks);
  auto run_task = [&](size_t t) {
    const int copy = static_cast<int>(t / n_images);
    const size_t i = t % n_images;
    const ImageRecord& img = dataset.images[i];
    const int slot = copy + slot_offset;
    Rng rng(DeriveSeed(cfg.seed, {static_cast<uint64_t>(copy),
                                  static_cast<uint64_t>(img.id)}));
    TaskOutput out;
    out.raster = img.raster;
    for (size_t a : per_image[i]) {
      const Annotation& ann = dataset.annotations[a];
      ++out.seen;
      auto rec = AugmentInstance(out.raster, ann, cfg, dataset.background_pool, rng);
      if (rec) {
        rec->copy = copy;
        rec->output_image_id = img.id + slot * image_stride;
        out.records.push_back(*rec);
      }
    }
    outputs[t] = std::move(out);
  };

  const int n_workers =
      static_cast<int>(std::min<size_t>(static_cast<size_t>(cfg.workers),
                                        std::max<size_t>(n_tasks, 1)));
  if (n_workers <= 1) {
    for (size_t t = 0; t < n_tasks; ++t) run_task(t);
  } else {
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    threads.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) {
      threads.emplace_back([&] {
        for (size_t t = next++; t < n_tasks; t = next++) {
          try {
            run_task(t);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = n_tasks;
          }
        }
      });
    }
    for (auto& th : threads) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  AugmentResult result;
  Dataset& out = result.dataset;
  out.extra = dataset.extra;
  out.background_pool = dataset.background_pool;
  AugmentReport& report = result.report;

  auto emit_slot = [&](int slot, const std::vector<ImageRaster*>& rasters) {
    for (size_t i = 0; i < n_images; ++i) {
      const ImageRecord& src = dataset.images[i];
      ImageRecord rec;
      rec.id = src.id + slot * image_stride;
      rec.file_name = SlotFileName(src.file_name, slot);
      rec.raster = rasters.empty() ? src.raster : std::move(*rasters[i]);
      rec.raw = src.raw;
      out.images.push_back(std::move(rec));
    }
    for (const auto& ann : dataset.annotations) {
      Annotation a = ann;
      a.id = ann.id + slot * ann_stride;
      a.image_id = ann.image_id + slot * image_stride;
      out.annotations.push_back(std::move(a));
    }
  };

  if (cfg.include_originals) emit_slot(0, {});
  for (int copy = 0; copy < cfg.copies; ++copy) {
    std::vector<ImageRaster*> rasters(n_images);
    for (size_t i = 0; i < n_images; ++i) {
      TaskOutput& t = outputs[static_cast<size_t>(copy) * n_images + i];
      rasters[i] = &t.raster;
      report.instances_seen += t.seen;
      for (auto& r : t.records) {
        report.clamped += r.clamped ? 1 : 0;
        report.fallbacks += r.fallback ? 1 : 0;
        report.records.push_back(r);
      }
    }
    emit_slot(copy + slot_offset, rasters);
  }
  std::stable_sort(report.records.begin(), report.records.end(),
                   [](const InstanceRecord& a, const InstanceRecord& b) {
                     if (a.copy != b.copy) return a.copy < b.copy;
                     if (a.image_id != b.image_id) return a.image_id < b.image_id;
                     return a.annotation_id < b.annotation_id;
                   });
  report.images_written = static_cast<int64_t>(out.images.size());
  return result;
}

}  // namespace shadowsmith
