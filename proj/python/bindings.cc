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
// Python bindings. Rasters are exchanged as 2-D uint16 arrays (height, width),
// masks as 2-D uint8 arrays, tensors as float64 arrays of any rank.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>
#include <string>
#include <vector>

#include "shadowsmith/augment.h"
#include "shadowsmith/cli.h"
#include "shadowsmith/context_match.h"
#include "shadowsmith/dataset.h"
#include "shadowsmith/dcn.h"
#include "shadowsmith/errors.h"
#include "shadowsmith/mask_codec.h"
#include "shadowsmith/png_io.h"
#include "shadowsmith/rect_sampler.h"
#include "shadowsmith/synth.h"
#include "shadowsmith/tensor.h"

namespace py = pybind11;

namespace shadowsmith {
namespace {

using U16Array = py::array_t<uint16_t, py::array::c_style | py::array::forcecast>;
using U8Array = py::array_t<uint8_t, py::array::c_style | py::array::forcecast>;
using F64Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

template <typename T>
Grid<T> GridFromArray(const py::array_t<T, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
  const auto* p = a.data();
  return Grid<T>(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)),
                 std::vector<T>(p, p + a.size()));
}

template <typename T>
py::array_t<T> ArrayFromSpan(std::span<const T> data, int width, int height) {
  py::array_t<T> out({height, width});
  std::copy(data.begin(), data.end(), out.mutable_data());
  return out;
}

ImageRaster RasterFromArray(const U16Array& a, int depth) {
  const SubImage g = GridFromArray<uint16_t>(a);
  ImageRaster r(g.width(), g.height(), depth, g.values());
  r.CheckLevels();
  return r;
}

py::array_t<uint16_t> RasterToArray(const ImageRaster& r) {
  return ArrayFromSpan<uint16_t>(r.data(), r.width(), r.height());
}

py::array_t<uint8_t> MaskToArray(const InstanceMask& m) {
  return ArrayFromSpan<uint8_t>(m.data(), m.width(), m.height());
}

Tensor TensorFromArray(const F64Array& a) {
  std::vector<size_t> shape(a.shape(), a.shape() + a.ndim());
  return Tensor(shape, std::vector<double>(a.data(), a.data() + a.size()));
}

py::array_t<double> TensorToArray(const Tensor& t) {
  std::vector<py::ssize_t> shape(t.shape().begin(), t.shape().end());
  py::array_t<double> out(shape);
  std::copy(t.data().begin(), t.data().end(), out.mutable_data());
  return out;
}

BoundingBox BoxFrom(const std::vector<int>& b) {
  if (b.size() != 4) throw py::value_error("bbox must be [x, y, w, h]");
  return {b[0], b[1], b[2], b[3]};
}

py::dict RectToDict(const SampledRect& s) {
  py::dict d;
  d["rect"] = std::vector<int>{s.rect.x, s.rect.y, s.rect.w, s.rect.h};
  d["area_ratio"] = s.params.area_ratio;
  d["aspect_ratio"] = s.params.aspect_ratio;
  d["clamped"] = s.clamped;
  d["attempts"] = s.attempts;
  return d;
}

}  // namespace
}  // namespace shadowsmith

PYBIND11_MODULE(_core, m) {
  using namespace shadowsmith;
  m.doc() = "Instance-level SAR ship augmentation and deformable kernel reference";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<DecodeError>(m, "DecodeError", PyExc_ValueError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  // Masks and rasters.
  m.def("decode_rle", [](const std::vector<uint32_t>& counts, int width, int height) {
    return MaskToArray(DecodeRle(counts, width, height));
  }, py::arg("counts"), py::arg("width"), py::arg("height"));
  m.def("encode_rle", [](const U8Array& mask) {
    return EncodeRle(GridFromArray<uint8_t>(mask));
  }, py::arg("mask"));
  m.def("decode_polygons", [](const std::vector<std::vector<double>>& polys, int width,
                              int height) {
    return MaskToArray(DecodePolygons(polys, width, height));
  }, py::arg("polygons"), py::arg("width"), py::arg("height"));
  m.def("read_png", [](const std::filesystem::path& path) {
    const ImageRaster r = ReadRaster(path);
    return py::make_tuple(RasterToArray(r), r.depth());
  }, py::arg("path"), "Returns (pixels, bit_depth).");
  m.def("write_png", [](const U16Array& pixels, const std::filesystem::path& path, int depth) {
    WriteRaster(RasterFromArray(pixels, depth), path);
  }, py::arg("pixels"), py::arg("path"), py::arg("depth") = 8);

  // Erasure rectangle.
  m.def("rect_dims", [](const std::vector<int>& bbox, double area_ratio, double aspect_ratio) {
    const RectDims d = ComputeRectDims(BoxFrom(bbox), {area_ratio, aspect_ratio});
    py::dict out;
    out["exact"] = py::make_tuple(d.exact_w, d.exact_h);
    out["size"] = py::make_tuple(d.w, d.h);
    out["feasible"] = d.feasible;
    return out;
  }, py::arg("bbox"), py::arg("area_ratio"), py::arg("aspect_ratio"));
  m.def("sample_rects", [](const std::vector<int>& bbox, int count, uint64_t seed,
                           std::pair<double, double> area, std::pair<double, double> aspect,
                           int max_retries) {
    Rng rng(seed);
    py::list out;
    for (int i = 0; i < count; ++i) {
      out.append(RectToDict(SampleRect(rng, BoxFrom(bbox), {area.first, area.second},
                                       {aspect.first, aspect.second}, max_retries)));
    }
    return out;
  }, py::arg("bbox"), py::arg("count") = 1, py::arg("seed") = 0,
     py::arg("area_range") = std::pair{kDefaultAreaRatioRange.lo, kDefaultAreaRatioRange.hi},
     py::arg("aspect_range") = std::pair{kDefaultAspectRatioRange.lo, kDefaultAspectRatioRange.hi},
     py::arg("max_retries") = kDefaultMaxRetries);

  // Context set and histogram matching.
  m.def("context_pixels", [](const U16Array& sub, const U8Array& mask) {
    return ContextPixels(GridFromArray<uint16_t>(sub), GridFromArray<uint8_t>(mask), 65536)
        .values;
  }, py::arg("sub"), py::arg("mask"));
  m.def("match_histogram", [](const U16Array& patch, const std::vector<uint16_t>& reference,
                              int depth) {
    const PixelSet ref{reference, 1u << depth};
    const SubImage out = MatchHistogram(GridFromArray<uint16_t>(patch), Histogram::Of(ref));
    return ArrayFromSpan<uint16_t>(out.data(), out.width(), out.height());
  }, py::arg("patch"), py::arg("reference"), py::arg("depth") = 8);

  // Augmentation of an in-memory image.
  m.def("augment_instance", [](const U16Array& pixels, int depth, const std::vector<int>& bbox,
                               const U8Array& mask, const std::string& method,
                               const std::vector<U16Array>& backgrounds, uint64_t seed) {
    ImageRaster raster = RasterFromArray(pixels, depth);
    Annotation ann;
    ann.id = 1;
    ann.bbox = BoxFrom(bbox);
    ann.mask = GridFromArray<uint8_t>(mask);
    std::vector<ImageRaster> pool;
    for (const auto& b : backgrounds) pool.push_back(RasterFromArray(b, depth));
    AugmentConfig cfg;
    cfg.method = ParseMethod(method);
    Rng rng(seed);
    const auto rec = AugmentInstance(raster, ann, cfg, pool, rng);
    py::object info = py::none();
    if (rec) {
      py::dict d;
      const BoundingBox a = rec->AbsoluteRect();
      d["rect"] = std::vector<int>{a.x, a.y, a.w, a.h};
      d["area_ratio"] = rec->area_ratio;
      d["aspect_ratio"] = rec->aspect_ratio;
      d["clamped"] = rec->clamped;
      d["fallback"] = rec->fallback;
      info = d;
    }
    return py::make_tuple(RasterToArray(raster), info);
  }, py::arg("pixels"), py::arg("depth"), py::arg("bbox"), py::arg("mask"),
     py::arg("method") = "cpil", py::arg("backgrounds") = std::vector<U16Array>{},
     py::arg("seed") = 0);

  // Synthetic scenes.
  m.def("generate_scene", [](int width, int height, int depth, int min_ships, int max_ships,
                             bool shadow, uint64_t seed) {
    SceneConfig cfg;
    cfg.width = width;
    cfg.height = height;
    cfg.depth = depth;
    cfg.min_ships = min_ships;
    cfg.max_ships = max_ships;
    cfg.min_ship_length = std::min(cfg.min_ship_length, std::min(width, height) / 4);
    cfg.max_ship_length = std::min(cfg.max_ship_length, std::min(width, height) / 2);
    cfg.shadow = shadow;
    cfg.seed = seed;
    cfg.Validate();
    Rng rng(seed);
    const Scene s = GenerateScene(cfg, rng);
    py::list anns;
    for (const auto& a : s.annotations) {
      py::dict d;
      d["bbox"] = std::vector<int>{a.bbox.x, a.bbox.y, a.bbox.w, a.bbox.h};
      d["mask"] = MaskToArray(a.mask);
      anns.append(d);
    }
    return py::make_tuple(RasterToArray(s.raster), anns);
  }, py::arg("width") = 256, py::arg("height") = 256, py::arg("depth") = 8,
     py::arg("min_ships") = 1, py::arg("max_ships") = 4, py::arg("shadow") = false,
     py::arg("seed") = 0);

  // Deformable kernels.
  m.def("bilinear_sample", [](const F64Array& plane, double row, double col) {
    if (plane.ndim() != 2) throw py::value_error("expected a 2-D plane");
    return dcn::BilinearSample({plane.data(), static_cast<size_t>(plane.size())},
                               static_cast<int>(plane.shape(0)),
                               static_cast<int>(plane.shape(1)), row, col);
  }, py::arg("plane"), py::arg("row"), py::arg("col"));
  m.def("deform_conv2d", [](const F64Array& x, const F64Array& w, const F64Array& offsets,
                            int stride, int padding) {
    return TensorToArray(dcn::DeformConv2dForward(TensorFromArray(x), TensorFromArray(w),
                                                  TensorFromArray(offsets), {stride, padding}));
  }, py::arg("input"), py::arg("weight"), py::arg("offsets"), py::arg("stride") = 1,
     py::arg("padding") = 0);
  m.def("deform_conv2d_backward", [](const F64Array& x, const F64Array& w,
                                     const F64Array& offsets, const F64Array& grad_output,
                                     int stride, int padding) {
    const auto g = dcn::DeformConv2dBackward(TensorFromArray(x), TensorFromArray(w),
                                             TensorFromArray(offsets),
                                             TensorFromArray(grad_output), {stride, padding});
    return py::make_tuple(TensorToArray(g.input), TensorToArray(g.weight),
                          TensorToArray(g.offsets));
  }, py::arg("input"), py::arg("weight"), py::arg("offsets"), py::arg("grad_output"),
     py::arg("stride") = 1, py::arg("padding") = 0);
  m.def("deform_roi_pool", [](const F64Array& x, std::vector<double> box,
                              std::pair<int, int> bins, py::object offsets) {
    if (box.size() != 4) throw py::value_error("roi must be [x, y, w, h]");
    const dcn::RoiBox roi{box[0], box[1], box[2], box[3], bins.first, bins.second};
    const Tensor off = offsets.is_none()
                           ? Tensor({2, size_t(bins.first), size_t(bins.second)})
                           : TensorFromArray(offsets.cast<F64Array>());
    const auto r = dcn::DeformRoiPoolForward(TensorFromArray(x), roi, off);
    return py::make_tuple(TensorToArray(r.output), r.empty_count);
  }, py::arg("input"), py::arg("roi"), py::arg("bins"), py::arg("offsets") = py::none(),
     "Returns (output, empty_bin_count).");

  // Command line, in-process.
  m.def("run_cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "shadowsmith");
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = cli::Run(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Runs a shadowsmith subcommand; returns (exit_code, stdout, stderr).");
}
