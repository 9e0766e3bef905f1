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
#include "shadowsmith/png_io.h"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace shadowsmith {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// libpng reports errors through longjmp; the message is stashed here so the
// caller can turn it into an exception after the jump.
struct ErrorState {
  std::jmp_buf jump;
  char message[256] = {0};
};

void OnPngError(png_structp png, png_const_charp msg) {
  auto* state = static_cast<ErrorState*>(png_get_error_ptr(png));
  std::snprintf(state->message, sizeof(state->message), "%s", msg);
  std::longjmp(state->jump, 1);
}

void OnPngWarning(png_structp, png_const_charp) {}

}  // namespace

ImageRaster ReadRaster(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open image file: " + path.string());

  png_byte signature[8];
  if (std::fread(signature, 1, 8, file.get()) != 8 ||
      png_sig_cmp(signature, 0, 8) != 0) {
    throw DecodeError("not a PNG file: " + path.string());
  }

  ErrorState state;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &state,
                                           OnPngError, OnPngWarning);
  if (png == nullptr) throw Error("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error("png_create_info_struct failed");
  }

  std::vector<uint16_t> data;
  std::vector<png_byte> row;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
  volatile bool color_rejected = false;

  if (setjmp(state.jump)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DecodeError("PNG decode failed for " + path.string() + ": " +
                      state.message);
  }

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, nullptr,
               nullptr, nullptr);
  if (color_type != PNG_COLOR_TYPE_GRAY) {
    color_rejected = true;
  } else {
    if (bit_depth < 8) {
      png_set_expand_gray_1_2_4_to_8(png);
      bit_depth = 8;
    }
    png_read_update_info(png, info);
    const size_t row_bytes = png_get_rowbytes(png, info);
    row.resize(row_bytes);
    data.resize(static_cast<size_t>(width) * height);
    for (png_uint_32 y = 0; y < height; ++y) {
      png_read_row(png, row.data(), nullptr);
      uint16_t* out = data.data() + static_cast<size_t>(y) * width;
      if (bit_depth == 16) {
        for (png_uint_32 x = 0; x < width; ++x) {
          out[x] = static_cast<uint16_t>((row[2 * x] << 8) | row[2 * x + 1]);
        }
      } else {
        for (png_uint_32 x = 0; x < width; ++x) out[x] = row[x];
      }
    }
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);

  if (color_rejected) {
    throw DecodeError("only single-channel grayscale images are supported: " +
                      path.string());
  }
  return ImageRaster(static_cast<int>(width), static_cast<int>(height),
                     bit_depth, std::move(data));
}

void WriteRaster(const ImageRaster& raster, const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot open file for writing: " + path.string());

  ErrorState state;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &state,
                                            OnPngError, OnPngWarning);
  if (png == nullptr) throw Error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("png_create_info_struct failed");
  }

  const int depth = raster.depth();
  const int width = raster.width();
  const int height = raster.height();
  std::vector<png_byte> row(static_cast<size_t>(width) * (depth / 8));

  if (setjmp(state.jump)) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encode failed for " + path.string() + ": " +
                  state.message);
  }

  png_init_io(png, file.get());
  png_set_IHDR(png, info, width, height, depth, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const uint16_t v = raster.at(x, y);
      if (depth == 16) {
        row[2 * x] = static_cast<png_byte>(v >> 8);
        row[2 * x + 1] = static_cast<png_byte>(v & 0xff);
      } else {
        row[x] = static_cast<png_byte>(v);
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);

  if (std::fflush(file.get()) != 0) {
    throw IoError("write failed: " + path.string());
  }
}

}  // namespace shadowsmith
