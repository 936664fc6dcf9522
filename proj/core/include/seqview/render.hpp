/*
 * Copyright 2026 The seqview Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>

#include "seqview/image.hpp"
#include "seqview/model.hpp"

namespace seqview {

struct RenderSettings {
  double near = 2.0;
  double far = 6.0;
  std::size_t n_samples = 64;
  std::size_t chunk = 128;  // rays per forward pass
};

/// Renders every pixel of `camera` with midpoint sampling. Pixels are
/// visited in a fixed pseudo-random order and grouped into chunks of
/// `chunk` rays, so the pixel transformer sees the same kind of scattered
/// context it is trained on. Deterministic for a given model.
Image render_view(const NeRFAModel& model, const Camera& camera, const RenderSettings& settings);

}  // namespace seqview
