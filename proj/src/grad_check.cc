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
#include "shadowsmith/grad_check.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "shadowsmith/errors.h"

namespace shadowsmith {

double RelativeError(double analytic, double numeric, double floor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

GradCheckReport CheckGradient(
    const std::function<double(std::span<const double>)>& loss,
    std::span<const double> point, std::span<const double> analytic,
    const GradCheckOptions& options) {
  if (point.size() != analytic.size()) {
    throw ContractError("CheckGradient: point and gradient sizes differ");
  }
  GradCheckReport report;
  std::vector<double> x(point.begin(), point.end());
  for (size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + options.epsilon;
    const double plus = loss(x);
    x[i] = saved - options.epsilon;
    const double minus = loss(x);
    x[i] = saved;
    const double numeric = (plus - minus) / (2.0 * options.epsilon);
    const double err =
        RelativeError(analytic[i], numeric, options.denominator_floor);
    ++report.checked;
    if (err > report.max_relative_error || report.checked == 1) {
      report.max_relative_error = err;
      report.worst_index = i;
      report.analytic_at_worst = analytic[i];
      report.numeric_at_worst = numeric;
    }
  }
  report.passed = report.max_relative_error < options.tolerance;
  return report;
}

}  // namespace shadowsmith
