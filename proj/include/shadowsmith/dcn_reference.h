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
#ifndef SHADOWSMITH_DCN_REFERENCE_H_
#define SHADOWSMITH_DCN_REFERENCE_H_

#include "shadowsmith/dcn.h"

// Plain (non-deformable) kernels written with direct integer indexing. They
// share no code with the deformable kernels and serve as their zero-offset
// oracle.
namespace shadowsmith::dcn::reference {

// Standard cross-correlation with zero padding; same layouts as
// DeformConv2dForward.
Tensor Conv2d(const Tensor& input, const Tensor& weight,
              const ConvParams& params);

// Average RoI pooling over integer lattice positions; positions outside the
// plane count as zeros. Empty bins produce 0.
Tensor AverageRoiPool(const Tensor& input, const RoiBox& roi);

}  // namespace shadowsmith::dcn::reference

#endif  // SHADOWSMITH_DCN_REFERENCE_H_
