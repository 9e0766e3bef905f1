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
#include "shadowsmith/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace shadowsmith {

void SceneConfig::Validate() const {
  if (width < 8 || height < 8) throw ConfigError("scene size must be >= 8");
  if (depth != 8 && depth != 16) throw ConfigError("depth must be 8 or 16");
  if (min_ships < 0 || max_ships < min_ships) {
    throw ConfigError("ship count range must satisfy 0 <= min <= max");
  }
  if (min_ship_length < 8 || max_ship_length < min_ship_length) {
    throw ConfigError("ship length range must satisfy 8 <= min <= max");
  }
  const int shadow_extra = shadow ? std::max(2, min_ship_length / 4) : 0;
  if (max_ship_length + 8 + shadow_extra > std::min(width, height)) {
    throw ConfigError("ship length exceeds the scene size");
  }
  if (looks < 1) throw ConfigError("looks must be >= 1");
  if (!(background_level > 0.0)) throw ConfigError("background level must be > 0");
  if (!(ship_contrast > 0.0)) throw ConfigError("ship contrast must be > 0");
}

double SpeckleFactor(Rng& rng, int looks) {
  double acc = 0.0;
  for (int i = 0; i < looks; ++i) acc -= std::log1p(-rng.Uniform01());
  return acc / looks;
}

namespace {

uint16_t Quantize(double v, uint16_t top) {
  return static_cast<uint16_t>(std::clamp(std::lround(v), 0L, static_cast<long>(top)));
}

struct Ellipse {
  double cx, cy, a, b, cos_t, sin_t;

  bool Contains(double px, double py) const {
    const double dx = px - cx;
    const double dy = py - cy;
    const double u = dx * cos_t + dy * sin_t;
    const double v = -dx * sin_t + dy * cos_t;
    return (u * u) / (a * a) + (v * v) / (b * b) <= 1.0;
  }
};

}  // namespace

Scene GenerateScene(const SceneConfig& cfg, Rng& rng) {
  cfg.Validate();
  Scene scene;
  scene.raster = ImageRaster(cfg.width, cfg.height, cfg.depth);
  const uint16_t top = scene.raster.max_level();
  for (auto& v : scene.raster.data()) {
    v = Quantize(cfg.background_level * SpeckleFactor(rng, cfg.looks), top);
  }

  // Pixels claimed by earlier ships, their shadows and a 2-pixel margin.
  BinaryGrid occupied(cfg.width, cfg.height);
  const int shadow_len = cfg.shadow ? std::max(2, cfg.min_ship_length / 4) : 0;
  const int ships = static_cast<int>(rng.UniformInt(cfg.min_ships, cfg.max_ships));

  for (int s = 0; s < ships; ++s) {
    for (int attempt = 0; attempt < cfg.placement_retries; ++attempt) {
      const double length = rng.Uniform(cfg.min_ship_length, cfg.max_ship_length);
      const double a = length / 2.0;
      const double b = std::max(1.5, a * rng.Uniform(0.2, 0.45));
      const double theta = rng.Uniform(0.0, std::numbers::pi);
      const double margin = a + 2.0;
      const double cx = rng.Uniform(margin, cfg.width - margin - shadow_len);
      const double cy = rng.Uniform(margin, cfg.height - margin);
      const Ellipse e{cx, cy, a, b, std::cos(theta), std::sin(theta)};

      const int x0 = std::max(0, static_cast<int>(cx - a) - 1);
      const int x1 = std::min(cfg.width - 1, static_cast<int>(cx + a) + 1);
      const int y0 = std::max(0, static_cast<int>(cy - a) - 1);
      const int y1 = std::min(cfg.height - 1, static_cast<int>(cy + a) + 1);

      InstanceMask mask(cfg.width, cfg.height);
      int min_x = cfg.width, max_x = -1, min_y = cfg.height, max_y = -1;
      bool collides = false;
      for (int y = y0; y <= y1 && !collides; ++y) {
        for (int x = x0; x <= x1; ++x) {
          if (!e.Contains(x + 0.5, y + 0.5)) continue;
          if (occupied.at(x, y)) {
            collides = true;
            break;
          }
          mask.at(x, y) = 1;
          min_x = std::min(min_x, x);
          max_x = std::max(max_x, x);
          min_y = std::min(min_y, y);
          max_y = std::max(max_y, y);
        }
      }
      if (collides || max_x < 0) continue;

      // Shadow: the run of pixels right after each mask row, fixed +x side.
      std::vector<std::pair<int, int>> shadow_px;
      if (cfg.shadow) {
        for (int y = min_y; y <= max_y; ++y) {
          int last = -1;
          for (int x = min_x; x <= max_x; ++x) {
            if (mask.at(x, y)) last = x;
          }
          if (last < 0) continue;
          for (int x = last + 1; x <= std::min(cfg.width - 1, last + shadow_len); ++x) {
            if (occupied.at(x, y)) {
              collides = true;
              break;
            }
            shadow_px.emplace_back(x, y);
          }
        }
        if (collides) continue;
      }

      const double ship_level = cfg.background_level * cfg.ship_contrast;
      for (int y = min_y; y <= max_y; ++y) {
        for (int x = min_x; x <= max_x; ++x) {
          if (mask.at(x, y)) {
            scene.raster.at(x, y) = Quantize(ship_level * SpeckleFactor(rng, cfg.looks), top);
          }
        }
      }
      for (auto [x, y] : shadow_px) {
        scene.raster.at(x, y) =
            Quantize(0.1 * cfg.background_level * SpeckleFactor(rng, cfg.looks), top);
      }
      const int mx0 = std::max(0, min_x - 2), mx1 = std::min(cfg.width - 1, max_x + 2 + shadow_len);
      const int my0 = std::max(0, min_y - 2), my1 = std::min(cfg.height - 1, max_y + 2);
      for (int y = my0; y <= my1; ++y) {
        for (int x = mx0; x <= mx1; ++x) occupied.at(x, y) = 1;
      }

      Annotation ann;
      ann.bbox = {min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
      ann.mask = std::move(mask);
      scene.annotations.push_back(std::move(ann));
      break;
    }
  }
  return scene;
}

Dataset GenerateDataset(const SynthDatasetConfig& cfg) {
  cfg.scene.Validate();
  if (cfg.images < 0 || cfg.backgrounds < 0) {
    throw ConfigError("image and background counts must be >= 0");
  }
  if (cfg.backgrounds > 0 && cfg.background_size < 16) {
    throw ConfigError("background size must be >= 16");
  }
  Dataset ds;
  ds.extra["info"] = {{"description", "shadowsmith synthetic SAR scenes"},
                      {"seed", cfg.scene.seed}};
  ds.extra["categories"] = nlohmann::json::array({{{"id", 1}, {"name", "ship"}}});
  int64_t next_ann = 1;
  for (int i = 0; i < cfg.images; ++i) {
    Rng rng(DeriveSeed(cfg.scene.seed, {0, static_cast<uint64_t>(i)}));
    Scene scene = GenerateScene(cfg.scene, rng);
    ImageRecord rec;
    rec.id = i + 1;
    char name[32];
    std::snprintf(name, sizeof(name), "img_%05d.png", i + 1);
    rec.file_name = name;
    rec.raster = std::move(scene.raster);
    for (auto& ann : scene.annotations) {
      ann.id = next_ann++;
      ann.image_id = rec.id;
      ann.raw = AnnotationToJson(ann);
      ds.annotations.push_back(std::move(ann));
    }
    ds.images.push_back(std::move(rec));
  }
  SceneConfig bg = cfg.scene;
  bg.width = bg.height = cfg.background_size;
  bg.min_ships = bg.max_ships = 0;
  bg.max_ship_length = bg.min_ship_length = 8;
  bg.shadow = false;
  for (int i = 0; i < cfg.backgrounds; ++i) {
    Rng rng(DeriveSeed(cfg.scene.seed, {1, static_cast<uint64_t>(i)}));
    ds.background_pool.push_back(GenerateScene(bg, rng).raster);
  }
  return ds;
}

}  // namespace shadowsmith
