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
"""Smoke tests for the Python bindings."""

import json
import math

import numpy as np
import pytest

import shadowsmith as ss


def test_rle_round_trip():
    assert ss.decode_rle([0, 4], 2, 2).tolist() == [[1, 1], [1, 1]]
    rng = np.random.default_rng(0)
    mask = (rng.random((7, 5)) < 0.4).astype(np.uint8)
    counts = ss.encode_rle(mask)
    np.testing.assert_array_equal(ss.decode_rle(counts, 5, 7), mask)
    with pytest.raises(ss.DecodeError):
        ss.decode_rle([1, 2], 2, 2)


def test_square_polygon():
    mask = ss.decode_polygons([[0, 0, 3, 0, 3, 3, 0, 3]], 4, 4)
    expected = np.zeros((4, 4), np.uint8)
    expected[:3, :3] = 1
    np.testing.assert_array_equal(mask, expected)


def test_png_round_trip(tmp_path):
    pixels = np.arange(16 * 9, dtype=np.uint16).reshape(9, 16) * 401
    ss.write_png(pixels, tmp_path / "a.png", depth=16)
    back, depth = ss.read_png(tmp_path / "a.png")
    assert depth == 16
    np.testing.assert_array_equal(back, pixels)


def test_rect_dims():
    d = ss.rect_dims([0, 0, 80, 40], 0.2, 0.5)
    assert d["size"] == (36, 18)
    assert d["exact"][0] == pytest.approx(math.sqrt(1280.0), rel=1e-12)
    assert not ss.rect_dims([0, 0, 100, 10], 0.4, 2.0)["feasible"]


def test_sampled_rects_touch_an_edge():
    for r in ss.sample_rects([5, 5, 40, 30], count=500, seed=3):
        x, y, w, h = r["rect"]
        assert 0 <= x and 0 <= y and x + w <= 40 and y + h <= 30
        assert x == 0 or y == 0 or x + w == 40 or y + h == 30
        assert 0.2 <= r["area_ratio"] <= 0.4
    a = ss.sample_rects([0, 0, 50, 50], count=20, seed=9)
    assert a == ss.sample_rects([0, 0, 50, 50], count=20, seed=9)


def test_histogram_matching():
    out = ss.match_histogram(np.array([[0, 128, 255]]), [50, 100, 150])
    assert out.tolist() == [[50, 100, 150]]
    sub = np.array([[10, 20], [30, 40]])
    assert ss.context_pixels(sub, np.array([[1, 0], [0, 1]])) == [20, 30]


def test_augment_instance_changes_only_the_rect():
    pixels, anns = ss.generate_scene(width=96, height=96, min_ships=1, max_ships=1, seed=4)
    assert len(anns) == 1
    bg, _ = ss.generate_scene(width=96, height=96, min_ships=0, max_ships=0, seed=5)
    ann = anns[0]
    out, info = ss.augment_instance(pixels, 8, ann["bbox"], ann["mask"], "cpil", [bg], seed=1)
    x, y, w, h = info["rect"]
    changed = np.argwhere(out != pixels)
    for r, c in changed:
        assert x <= c < x + w and y <= r < y + h
    inside = set(out[y:y + h, x:x + w].ravel().tolist())
    bx, by, bw, bh = ann["bbox"]
    sub = pixels[by:by + bh, bx:bx + bw]
    crop = ann["mask"][by:by + bh, bx:bx + bw]
    assert inside <= set(sub[crop == 0].tolist())
    same, none_info = ss.augment_instance(pixels, 8, ann["bbox"], ann["mask"], "none")
    assert none_info is None
    np.testing.assert_array_equal(same, pixels)


def test_deformable_kernels():
    plane = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert ss.bilinear_sample(plane, 0.5, 0.5) == 2.5
    x = np.tile(np.arange(3.0), (3, 1))[None]
    off = np.zeros((2, 3, 3))
    off[1, 1, 1] = 0.5
    y = ss.deform_conv2d(x, np.full((1, 1, 1, 1), 2.0), off)
    assert y[0, 1, 1] == 3.0
    pooled, empty = ss.deform_roi_pool(np.arange(16.0).reshape(1, 4, 4), [0, 0, 4, 4], (2, 2))
    assert pooled[0].tolist() == [[2.5, 4.5], [10.5, 12.5]]
    assert empty == 0


def test_conv_gradient_matches_finite_difference():
    rng = np.random.default_rng(1)
    x = rng.uniform(-1, 1, (2, 6, 6))
    w = rng.uniform(-1, 1, (1, 2, 3, 3))
    off = rng.uniform(0.1, 0.9, (18, 4, 4))
    dy = rng.uniform(-1, 1, (1, 4, 4))
    _, dw, _ = ss.deform_conv2d_backward(x, w, off, dy)
    eps = 1e-5
    for idx in [(0, 0, 0, 0), (0, 1, 2, 1)]:
        wp, wm = w.copy(), w.copy()
        wp[idx] += eps
        wm[idx] -= eps
        fd = ((ss.deform_conv2d(x, wp, off) - ss.deform_conv2d(x, wm, off)) * dy).sum() / (2 * eps)
        assert dw[idx] == pytest.approx(fd, rel=1e-6, abs=1e-9)


def test_cli_pipeline(tmp_path):
    data = tmp_path / "data"
    code, out, err = ss.run_cli(["synth", "--output", str(data), "--images", "3",
                                 "--width", "96", "--height", "96", "--length-max", "40",
                                 "--seed", "2"])
    assert code == 0, err
    assert json.loads(out)["images"] == 3
    code, _, err = ss.run_cli(["augment", "--input", str(data), "--output",
                               str(tmp_path / "out"), "--method", "cpil"])
    assert code == 2
    assert "--backgrounds" in err
    code, _, err = ss.run_cli(["augment", "--input", str(data), "--output",
                               str(tmp_path / "out"), "--method", "cpil",
                               "--backgrounds", str(data / "backgrounds")])
    assert code == 0, err
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["area_ratio_range"] == [0.2, 0.4]
