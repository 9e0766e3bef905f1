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
#ifndef SHADOWSMITH_SYNTH_H_
#define SHADOWSMITH_SYNTH_H_

#include <cstdint>
#include <vector>

#include "shadowsmith/dataset.h"
#include "shadowsmith/random.h"

namespace shadowsmith {

// Synthetic SAR-like scenes: gamma speckle over a flat sea, bright
// elliptical ships with exact masks, optional radar shadow.
struct SceneConfig {
  int width = 256;
  int height = 256;
  int depth = 8;
  int min_ships = 1;
  int max_ships = 4;
  int min_ship_length = 20;  // major axis, pixels
  int max_ship_length = 64;
  double background_level = 60.0;  // mean sea intensity
  double ship_contrast = 4.0;      // ship mean = contrast * background
  int looks = 4;                   // speckle look count
  bool shadow = false;
  int placement_retries = 50;
  uint64_t seed = 0;

  // Throws ConfigError.
  void Validate() const;
};

struct Scene {
  ImageRaster raster;
  std::vector<Annotation> annotations;  // id and image_id left at 0
};

// Unit-mean L-look gamma factor (mean of `looks` unit exponentials).
double SpeckleFactor(Rng& rng, int looks);

// Ships that cannot be placed without overlap after the configured retries
// are skipped, so the count may undershoot.
Scene GenerateScene(const SceneConfig& cfg, Rng& rng);

struct SynthDatasetConfig {
  SceneConfig scene;
  int images = 8;
  int backgrounds = 4;
  int background_size = 128;
};

// Images get ids 1..N and file names img_00001.png, ...; annotation ids are
// 1..M in image order. Each scene and background draws from its own stream
// derived from scene.seed.
Dataset GenerateDataset(const SynthDatasetConfig& cfg);

}  // namespace shadowsmith

#endif  // SHADOWSMITH_SYNTH_H_
