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

#include "seqview/render.hpp"

#include <algorithm>
#include <numeric>

#include "seqview/error.hpp"
#include "seqview/random.hpp"

namespace seqview {

namespace {

constexpr std::uint64_t kRenderOrderSeed = 0x5eedf00dULL;

}  // namespace

Image render_view(const NeRFAModel& model, const Camera& camera, const RenderSettings& settings) {
  if (settings.chunk == 0) throw DomainError("render chunk size must be positive");
  NoGradGuard no_grad;
  const std::size_t total = camera.height * camera.width;
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(kRenderOrderSeed);
  for (std::size_t i = total; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);

  Image image(camera.height, camera.width);
  for (std::size_t start = 0; start < total; start += settings.chunk) {
    const std::size_t end = std::min(total, start + settings.chunk);
    std::vector<PixelId> pixels;
    pixels.reserve(end - start);
    for (std::size_t i = start; i < end; ++i) {
      pixels.push_back({order[i] / camera.width, order[i] % camera.width});
    }
    const RayPointBatch batch = sample_ray_points(generate_rays(camera, pixels), settings.near,
                                                  settings.far, settings.n_samples,
                                                  Sampling::midpoint());
    const Tensor colors = forward(model, batch);
    const auto v = colors.values();
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      for (std::size_t c = 0; c < 3; ++c) image.at(pixels[i].row, pixels[i].col, c) = v[i * 3 + c];
    }
  }
  return image;
}

}  // namespace seqview
