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
#ifndef SHADOWSMITH_DCN_VERIFY_H_
#define SHADOWSMITH_DCN_VERIFY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "shadowsmith/dcn.h"
#include "shadowsmith/grad_check.h"
#include "shadowsmith/random.h"

namespace shadowsmith::dcn {

// Uniform values in [lo, hi).
Tensor RandomTensor(Rng& rng, std::vector<size_t> shape, double lo = -1.0,
                    double hi = 1.0);

// Offsets of the form k + f with k in {-1, 0, 1} and f in [0.1, 0.9], so
// every sample position is at least 0.1 away from the integer lattice.
Tensor RandomFractionalOffsets(Rng& rng, std::vector<size_t> shape);

struct ConvGradientCase {
  GradCheckReport input;
  GradCheckReport weight;
  GradCheckReport offsets;
};

struct RoiGradientCase {
  GradCheckReport input;
  GradCheckReport offsets;
};

// One randomized finite-difference check of each gradient. With
// `inject_fault` the largest analytic input-gradient entry is scaled by 1.1
// before comparison.
ConvGradientCase RunConvGradientCase(uint64_t seed, bool inject_fault = false,
                                     const GradCheckOptions& options = {});
RoiGradientCase RunRoiGradientCase(uint64_t seed, bool inject_fault = false,
                                   const GradCheckOptions& options = {});

struct VerifyOptions {
  uint64_t seed = 20211;
  int zero_offset_cases = 100;
  int gradient_cases = 20;
  bool inject_gradient_fault = false;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double metric = 0.0;  // worst error observed, or 0 for exact checks
  std::string detail;
};

// The full kernel verification suite behind `shadowsmith dcn-check`.
std::vector<CheckResult> RunDcnVerification(const VerifyOptions& options);

}  // namespace shadowsmith::dcn

#endif  // SHADOWSMITH_DCN_VERIFY_H_
