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
#include "shadowsmith/dcn_verify.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shadowsmith/dcn_reference.h"

namespace shadowsmith::dcn {
namespace {

double MaxAbsDiff(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) return INFINITY;
  double m = 0.0;
  for (size_t i = 0; i < a.numel(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double Dot(const Tensor& a, const Tensor& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.numel(); ++i) s += a[i] * b[i];
  return s;
}

Tensor WithData(const Tensor& like, std::span<const double> data) {
  return Tensor(like.shape(), std::vector<double>(data.begin(), data.end()));
}

void InjectFault(Tensor& grad) {
  size_t idx = 0;
  for (size_t i = 1; i < grad.numel(); ++i) {
    if (std::abs(grad[i]) > std::abs(grad[idx])) idx = i;
  }
  grad[idx] *= 1.1;
}

struct ConvShape {
  size_t c_in, c_out, height, width, kh, kw;
  ConvParams params;
  size_t out_h, out_w;
};

ConvShape RandomConvShape(Rng& rng, int max_hw) {
  ConvShape s;
  s.c_in = static_cast<size_t>(rng.UniformInt(1, 3));
  s.c_out = static_cast<size_t>(rng.UniformInt(1, 3));
  s.kh = static_cast<size_t>(rng.UniformInt(1, 3));
  s.kw = static_cast<size_t>(rng.UniformInt(1, 3));
  s.height = static_cast<size_t>(rng.UniformInt(4, max_hw));
  s.width = static_cast<size_t>(rng.UniformInt(4, max_hw));
  s.params.stride = static_cast<int>(rng.UniformInt(1, 2));
  s.params.padding = static_cast<int>(rng.UniformInt(0, 2));
  s.out_h = static_cast<size_t>(ConvOutputSize(static_cast<int>(s.height),
                                               static_cast<int>(s.kh),
                                               s.params.stride, s.params.padding));
  s.out_w = static_cast<size_t>(ConvOutputSize(static_cast<int>(s.width),
                                               static_cast<int>(s.kw),
                                               s.params.stride, s.params.padding));
  return s;
}

RoiBox RandomRoi(Rng& rng, int height, int width) {
  RoiBox roi;
  roi.x = rng.Uniform(0.0, width - 2.0);
  roi.y = rng.Uniform(0.0, height - 2.0);
  roi.w = rng.Uniform(1.0, width - roi.x);
  roi.h = rng.Uniform(1.0, height - roi.y);
  roi.bins_h = static_cast<int>(rng.UniformInt(1, 3));
  roi.bins_w = static_cast<int>(rng.UniformInt(1, 3));
  return roi;
}

std::string Fmt(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << std::scientific << v;
  return ss.str();
}

CheckResult Exact(std::string name, double got, double want) {
  CheckResult r;
  r.name = std::move(name);
  r.metric = std::abs(got - want);
  r.passed = got == want;
  r.detail = "got " + std::to_string(got) + ", expected " + std::to_string(want);
  return r;
}

CheckResult Within(std::string name, double worst, double tol, int cases) {
  CheckResult r;
  r.name = std::move(name);
  r.metric = worst;
  r.passed = worst <= tol;
  r.detail = std::to_string(cases) + " cases, worst " + Fmt(worst) +
             " (limit " + Fmt(tol) + ")";
  return r;
}

void Fold(GradCheckReport& acc, const GradCheckReport& r) {
  acc.checked += r.checked;
  if (r.max_relative_error >= acc.max_relative_error) {
    acc.max_relative_error = r.max_relative_error;
    acc.worst_index = r.worst_index;
    acc.analytic_at_worst = r.analytic_at_worst;
    acc.numeric_at_worst = r.numeric_at_worst;
  }
  acc.passed = acc.passed && r.passed;
}

CheckResult FromGrad(std::string name, const GradCheckReport& r, int cases,
                     double tol) {
  CheckResult c;
  c.name = std::move(name);
  c.metric = r.max_relative_error;
  c.passed = r.passed;
  c.detail = std::to_string(cases) + " cases, " + std::to_string(r.checked) +
             " coords, max rel err " + Fmt(r.max_relative_error) + " (limit " +
             Fmt(tol) + ")";
  if (!r.passed) {
    c.detail += "; worst coordinate " + std::to_string(r.worst_index) +
                " analytic " + Fmt(r.analytic_at_worst) + " vs numeric " +
                Fmt(r.numeric_at_worst);
  }
  return c;
}

}  // namespace

Tensor RandomTensor(Rng& rng, std::vector<size_t> shape, double lo, double hi) {
  Tensor t(std::move(shape));
  for (auto& v : t.data()) v = rng.Uniform(lo, hi);
  return t;
}

Tensor RandomFractionalOffsets(Rng& rng, std::vector<size_t> shape) {
  Tensor t(std::move(shape));
  for (auto& v : t.data()) {
    v = static_cast<double>(rng.UniformInt(-1, 1)) + rng.Uniform(0.1, 0.9);
  }
  return t;
}

ConvGradientCase RunConvGradientCase(uint64_t seed, bool inject_fault,
                                     const GradCheckOptions& options) {
  Rng rng(seed);
  const ConvShape s = RandomConvShape(rng, 7);
  const Tensor x = RandomTensor(rng, {s.c_in, s.height, s.width});
  const Tensor w = RandomTensor(rng, {s.c_out, s.c_in, s.kh, s.kw});
  const Tensor off = RandomFractionalOffsets(rng, {2 * s.kh * s.kw, s.out_h, s.out_w});
  const Tensor dy = RandomTensor(rng, {s.c_out, s.out_h, s.out_w});

  DeformConv2dGrads g = DeformConv2dBackward(x, w, off, dy, s.params);
  if (inject_fault) InjectFault(g.input);

  ConvGradientCase out;
  out.input = CheckGradient(
      [&](std::span<const double> v) {
        return Dot(dy, DeformConv2dForward(WithData(x, v), w, off, s.params));
      },
      x.data(), g.input.data(), options);
  out.weight = CheckGradient(
      [&](std::span<const double> v) {
        return Dot(dy, DeformConv2dForward(x, WithData(w, v), off, s.params));
      },
      w.data(), g.weight.data(), options);
  out.offsets = CheckGradient(
      [&](std::span<const double> v) {
        return Dot(dy, DeformConv2dForward(x, w, WithData(off, v), s.params));
      },
      off.data(), g.offsets.data(), options);
  return out;
}

RoiGradientCase RunRoiGradientCase(uint64_t seed, bool inject_fault,
                                   const GradCheckOptions& options) {
  Rng rng(seed);
  const size_t channels = static_cast<size_t>(rng.UniformInt(1, 3));
  const int height = static_cast<int>(rng.UniformInt(6, 12));
  const int width = static_cast<int>(rng.UniformInt(6, 12));
  const RoiBox roi = RandomRoi(rng, height, width);
  const Tensor x = RandomTensor(rng, {channels, static_cast<size_t>(height),
                                      static_cast<size_t>(width)});
  const Tensor off = RandomFractionalOffsets(
      rng, {2, static_cast<size_t>(roi.bins_h), static_cast<size_t>(roi.bins_w)});
  const Tensor dy = RandomTensor(
      rng, {channels, static_cast<size_t>(roi.bins_h), static_cast<size_t>(roi.bins_w)});

  RoiPoolGrads g = DeformRoiPoolBackward(x, roi, off, dy);
  if (inject_fault) InjectFault(g.input);

  RoiGradientCase out;
  out.input = CheckGradient(
      [&](std::span<const double> v) {
        return Dot(dy, DeformRoiPoolForward(WithData(x, v), roi, off).output);
      },
      x.data(), g.input.data(), options);
  out.offsets = CheckGradient(
      [&](std::span<const double> v) {
        return Dot(dy, DeformRoiPoolForward(x, roi, WithData(off, v)).output);
      },
      off.data(), g.offsets.data(), options);
  return out;
}

std::vector<CheckResult> RunDcnVerification(const VerifyOptions& options) {
  std::vector<CheckResult> results;
  constexpr double kExactTol = 1e-12;

  // Hand-derived values.
  {
    const std::vector<double> plane = {1, 2, 3, 4};
    results.push_back(Exact("bilinear (0.5, 0.5) on [[1,2],[3,4]]",
                            BilinearSample(plane, 2, 2, 0.5, 0.5), 2.5));
    results.push_back(Exact("bilinear lattice point (0, 0)",
                            BilinearSample(plane, 2, 2, 0.0, 0.0), 1.0));
    results.push_back(Exact("bilinear zero padding (0, -0.5)",
                            BilinearSample(plane, 2, 2, 0.0, -0.5), 0.5));

    Tensor ramp({1, 3, 3});
    for (size_t r = 0; r < 3; ++r) {
      for (size_t c = 0; c < 3; ++c) ramp.at(0, r, c) = static_cast<double>(c);
    }
    Tensor w({1, 1, 1, 1}, 2.0);
    Tensor off({2, 3, 3});
    off.at(1, 1, 1) = 0.5;
    results.push_back(Exact("ramp conv, offset (0, +0.5) at centre",
                            DeformConv2dForward(ramp, w, off, {}).at(0, 1, 1),
                            3.0));

    Tensor seq({1, 4, 4});
    for (size_t i = 0; i < 16; ++i) seq[i] = static_cast<double>(i);
    const RoiBox quad{0, 0, 4, 4, 2, 2};
    const Tensor pooled = DeformRoiPoolForward(seq, quad, Tensor({2, 2, 2})).output;
    const double want[4] = {2.5, 4.5, 10.5, 12.5};
    double worst = 0.0;
    for (size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(pooled[i] - want[i]));
    CheckResult q;
    q.name = "quadrant pooling [[2.5,4.5],[10.5,12.5]]";
    q.metric = worst;
    q.passed = worst == 0.0;
    q.detail = q.passed ? "exact" : "max diff " + Fmt(worst);
    results.push_back(q);
    const RoiBox global{0, 0, 4, 4, 1, 1};
    results.push_back(Exact("global average pooling of 0..15",
                            DeformRoiPoolForward(seq, global, Tensor({2, 1, 1}))
                                .output[0],
                            7.5));
  }

  // Zero offsets reduce to the plain kernels.
  {
    Rng rng(DeriveSeed(options.seed, {1}));
    double worst = 0.0;
    for (int n = 0; n < options.zero_offset_cases; ++n) {
      const ConvShape s = RandomConvShape(rng, 10);
      const Tensor x = RandomTensor(rng, {s.c_in, s.height, s.width});
      const Tensor w = RandomTensor(rng, {s.c_out, s.c_in, s.kh, s.kw});
      const Tensor off({2 * s.kh * s.kw, s.out_h, s.out_w});
      worst = std::max(worst, MaxAbsDiff(DeformConv2dForward(x, w, off, s.params),
                                         reference::Conv2d(x, w, s.params)));
    }
    results.push_back(Within("zero-offset deformable conv == standard conv",
                             worst, kExactTol, options.zero_offset_cases));
  }
  {
    Rng rng(DeriveSeed(options.seed, {2}));
    double worst = 0.0;
    for (int n = 0; n < options.zero_offset_cases; ++n) {
      const size_t c = static_cast<size_t>(rng.UniformInt(1, 3));
      const int h = static_cast<int>(rng.UniformInt(4, 12));
      const int w = static_cast<int>(rng.UniformInt(4, 12));
      const RoiBox roi = RandomRoi(rng, h, w);
      const Tensor x = RandomTensor(rng, {c, static_cast<size_t>(h), static_cast<size_t>(w)});
      const Tensor off({2, static_cast<size_t>(roi.bins_h), static_cast<size_t>(roi.bins_w)});
      worst = std::max(worst, MaxAbsDiff(DeformRoiPoolForward(x, roi, off).output,
                                         reference::AverageRoiPool(x, roi)));
    }
    results.push_back(Within("zero-offset deformable RoI pool == average RoI pool",
                             worst, kExactTol, options.zero_offset_cases));
  }

  // Linearity in input and weight at fixed offsets.
  {
    Rng rng(DeriveSeed(options.seed, {3}));
    double worst = 0.0;
    constexpr int kCases = 20;
    for (int n = 0; n < kCases; ++n) {
      const ConvShape s = RandomConvShape(rng, 8);
      const Tensor x1 = RandomTensor(rng, {s.c_in, s.height, s.width});
      const Tensor x2 = RandomTensor(rng, {s.c_in, s.height, s.width});
      const Tensor w1 = RandomTensor(rng, {s.c_out, s.c_in, s.kh, s.kw});
      const Tensor w2 = RandomTensor(rng, {s.c_out, s.c_in, s.kh, s.kw});
      const Tensor off = RandomFractionalOffsets(rng, {2 * s.kh * s.kw, s.out_h, s.out_w});
      const double a = rng.Uniform(-2, 2);
      const double b = rng.Uniform(-2, 2);
      Tensor xm(x1.shape()), wm(w1.shape());
      for (size_t i = 0; i < xm.numel(); ++i) xm[i] = a * x1[i] + b * x2[i];
      for (size_t i = 0; i < wm.numel(); ++i) wm[i] = a * w1[i] + b * w2[i];
      const Tensor fx = DeformConv2dForward(xm, w1, off, s.params);
      const Tensor fx1 = DeformConv2dForward(x1, w1, off, s.params);
      const Tensor fx2 = DeformConv2dForward(x2, w1, off, s.params);
      const Tensor fw = DeformConv2dForward(x1, wm, off, s.params);
      const Tensor fw2 = DeformConv2dForward(x1, w2, off, s.params);
      for (size_t i = 0; i < fx.numel(); ++i) {
        worst = std::max(worst, std::abs(fx[i] - (a * fx1[i] + b * fx2[i])));
        worst = std::max(worst, std::abs(fw[i] - (a * fx1[i] + b * fw2[i])));
      }
    }
    results.push_back(Within("linearity in input and weight", worst, kExactTol, kCases));
  }

  // Constant input: conv gives c * sum(W) wherever every tap samples inside
  // the plane; pooling gives c wherever every sample is inside.
  {
    Rng rng(DeriveSeed(options.seed, {4}));
    double worst = 0.0;
    int checked = 0;
    constexpr int kCases = 20;
    for (int n = 0; n < kCases; ++n) {
      const size_t h = 9, w = 9;
      const size_t kh = 3, kw = 3;
      const double c = rng.Uniform(-3, 3);
      const Tensor x({1, h, w}, c);
      const Tensor wt = RandomTensor(rng, {2, 1, kh, kw});
      Tensor off({2 * kh * kw, h - 2, w - 2});
      for (auto& v : off.data()) v = rng.Uniform(-0.9, 0.9);
      const Tensor y = DeformConv2dForward(x, wt, off, {});
      for (size_t oy = 0; oy < h - 2; ++oy) {
        for (size_t ox = 0; ox < w - 2; ++ox) {
          bool interior = true;
          for (size_t k = 0; k < kh * kw && interior; ++k) {
            const double r = static_cast<double>(oy + k / kw) + off.at(2 * k, oy, ox);
            const double q = static_cast<double>(ox + k % kw) + off.at(2 * k + 1, oy, ox);
            interior = r >= 0 && r <= h - 1.0 && q >= 0 && q <= w - 1.0;
          }
          if (!interior) continue;
          for (size_t o = 0; o < 2; ++o) {
            double sum = 0.0;
            for (size_t k = 0; k < kh * kw; ++k) sum += wt.at(o, 0, k / kw, k % kw);
            worst = std::max(worst, std::abs(y.at(o, oy, ox) - c * sum));
          }
          ++checked;
        }
      }
      const RoiBox roi{2.0, 2.0, 5.0, 5.0, 2, 2};
      Tensor poff({2, 2, 2});
      for (auto& v : poff.data()) v = rng.Uniform(-1.5, 1.5);
      const Tensor p = DeformRoiPoolForward(x, roi, poff).output;
      for (size_t i = 0; i < p.numel(); ++i) worst = std::max(worst, std::abs(p[i] - c));
    }
    CheckResult r = Within("constant field", worst, kExactTol, kCases);
    r.passed = r.passed && checked > 0;
    results.push_back(r);
  }

  // Integer shifts of the input shift the zero-offset output.
  {
    Rng rng(DeriveSeed(options.seed, {5}));
    double worst = 0.0;
    constexpr int kCases = 20;
    for (int n = 0; n < kCases; ++n) {
      const size_t h = 10, w = 10, k = 3;
      const size_t di = static_cast<size_t>(rng.UniformInt(0, 3));
      const size_t dj = static_cast<size_t>(rng.UniformInt(0, 3));
      const Tensor x = RandomTensor(rng, {1, h, w});
      Tensor shifted({1, h, w});
      for (size_t r = di; r < h; ++r) {
        for (size_t c = dj; c < w; ++c) shifted.at(0, r, c) = x.at(0, r - di, c - dj);
      }
      const Tensor wt = RandomTensor(rng, {1, 1, k, k});
      const Tensor off({2 * k * k, h - 2, w - 2});
      const Tensor y = DeformConv2dForward(x, wt, off, {});
      const Tensor ys = DeformConv2dForward(shifted, wt, off, {});
      for (size_t r = di; r < h - 2; ++r) {
        for (size_t c = dj; c < w - 2; ++c) {
          if (r - di + k > h || c - dj + k > w) continue;
          worst = std::max(worst, std::abs(ys.at(0, r, c) - y.at(0, r - di, c - dj)));
        }
      }
    }
    results.push_back(Within("translation equivariance (zero offsets)", worst,
                             kExactTol, kCases));
  }

  // Adjoint identities with zero offsets.
  {
    Rng rng(DeriveSeed(options.seed, {6}));
    const Tensor x = RandomTensor(rng, {2, 8, 8});
    const RoiBox roi{1.0, 0.5, 6.0, 7.0, 3, 2};
    const Tensor off({2, 3, 2});
    const Tensor dy = RandomTensor(rng, {2, 3, 2});
    const RoiPoolGrads g = DeformRoiPoolBackward(x, roi, off, dy);
    double sum_dx = 0.0, sum_dy = 0.0;
    for (double v : g.input.data()) sum_dx += v;
    for (double v : dy.data()) sum_dy += v;
    results.push_back(Within("RoI pool dX mass conservation",
                             std::abs(sum_dx - sum_dy), kExactTol, 1));

    const Tensor zero_dy({2, 3, 2});
    const RoiPoolGrads gz = DeformRoiPoolBackward(x, roi, off, zero_dy);
    const Tensor w = RandomTensor(rng, {2, 2, 3, 3});
    const Tensor coff = RandomFractionalOffsets(rng, {18, 6, 6});
    const DeformConv2dGrads gc =
        DeformConv2dBackward(x, w, coff, Tensor({2, 6, 6}), {});
    double m = 0.0;
    for (const Tensor* t : {&gz.input, &gz.offsets, &gc.input, &gc.weight, &gc.offsets}) {
      for (double v : t->data()) m = std::max(m, std::abs(v));
    }
    CheckResult r = Within("zero upstream gradient gives zero gradients", m, 0.0, 2);
    results.push_back(r);
  }

  // Finite-difference gradient checks.
  {
    const GradCheckOptions go;
    GradCheckReport cx, cw, co, px, po;
    for (int n = 0; n < options.gradient_cases; ++n) {
      const bool fault = options.inject_gradient_fault && n == 0;
      const ConvGradientCase c =
          RunConvGradientCase(DeriveSeed(options.seed, {7, static_cast<uint64_t>(n)}), fault, go);
      Fold(cx, c.input);
      Fold(cw, c.weight);
      Fold(co, c.offsets);
      const RoiGradientCase p =
          RunRoiGradientCase(DeriveSeed(options.seed, {8, static_cast<uint64_t>(n)}), fault, go);
      Fold(px, p.input);
      Fold(po, p.offsets);
    }
    const int n = options.gradient_cases;
    results.push_back(FromGrad("deform conv dX vs finite differences", cx, n, go.tolerance));
    results.push_back(FromGrad("deform conv dW vs finite differences", cw, n, go.tolerance));
    results.push_back(FromGrad("deform conv dOffsets vs finite differences", co, n, go.tolerance));
    results.push_back(FromGrad("RoI pool dX vs finite differences", px, n, go.tolerance));
    results.push_back(FromGrad("RoI pool dOffsets vs finite differences", po, n, go.tolerance));
  }
  return results;
}

}  // namespace shadowsmith::dcn
