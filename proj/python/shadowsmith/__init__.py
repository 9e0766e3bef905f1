# Copyright 2026 The Shadowsmith Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Context-preserving instance augmentation for SAR ship datasets."""

from shadowsmith._core import (
    ConfigError,
    ContractError,
    DecodeError,
    IoError,
    ValidationError,
    augment_instance,
    bilinear_sample,
    context_pixels,
    decode_polygons,
    decode_rle,
    deform_conv2d,
    deform_conv2d_backward,
    deform_roi_pool,
    encode_rle,
    generate_scene,
    match_histogram,
    read_png,
    rect_dims,
    run_cli,
    sample_rects,
    write_png,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ContractError",
    "DecodeError",
    "IoError",
    "ValidationError",
    "augment_instance",
    "bilinear_sample",
    "context_pixels",
    "decode_polygons",
    "decode_rle",
    "deform_conv2d",
    "deform_conv2d_backward",
    "deform_roi_pool",
    "encode_rle",
    "generate_scene",
    "match_histogram",
    "read_png",
    "rect_dims",
    "run_cli",
    "sample_rects",
    "write_png",
]
