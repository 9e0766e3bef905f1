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
#ifndef SHADOWSMITH_PNG_IO_H_
#define SHADOWSMITH_PNG_IO_H_

#include <filesystem>

#include "shadowsmith/image.h"

namespace shadowsmith {

// Reads a grayscale PNG. 1/2/4-bit images are expanded to 8 bits; color,
// palette and alpha images are rejected with DecodeError.
ImageRaster ReadRaster(const std::filesystem::path& path);

// Writes an 8- or 16-bit grayscale PNG; lossless at both depths.
void WriteRaster(const ImageRaster& raster, const std::filesystem::path& path);

}  // namespace shadowsmith

#endif  // SHADOWSMITH_PNG_IO_H_
