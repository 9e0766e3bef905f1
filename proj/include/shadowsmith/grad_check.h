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
#ifndef SHADOWSMITH_GRAD_CHECK_H_
#define SHADOWSMITH_GRAD_CHECK_H_

#include <cstddef>
#include <functional>
#include <span>

namespace shadowsmith {

struct GradCheckOptions {
  double epsilon = 1e-5;
  double tolerance = 1e-4;
  // Relative error is |a - n| / max(|a|, |n|, denominator_floor), so
  // coordinates whose true gradient is ~0 are judged on absolute error.
  double denominator_floor = 1e-6;
};

struct GradCheckReport {
  size_t checked = 0;
  double max_relative_error = 0.0;
  size_t worst_index = 0;
  double analytic_at_worst = 0.0;
  double numeric_at_worst = 0.0;
  bool passed = true;
};

double RelativeError(double analytic, double numeric, double floor);

// Compares `analytic` against central differences of the scalar `loss` at
// `point`, one coordinate at a time. The point should avoid kinks of the
// function (for bilinear sampling: integer sample positions).
GradCheckReport CheckGradient(
    const std::function<double(std::span<const double>)>& loss,
    std::span<const double> point, std::span<const double> analytic,
    const GradCheckOptions& options = {});

}  // namespace shadowsmith

#endif  // SHADOWSMITH_GRAD_CHECK_H_
