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

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "seqview/tensor.hpp"

namespace seqview {

using Vec3 = std::array<double, 3>;
using Mat4 = std::array<double, 16>;  // row-major

Vec3 normalize(const Vec3& v);
double norm(const Vec3& v);

/// Pinhole camera. Looks along its local -z axis with +y up; image x grows
/// to the right and image y grows downward. The principal point sits at the
/// image center.
struct Camera {
  Mat4 world_from_camera{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
  double focal = 1.0;
  std::size_t width = 1;
  std::size_t height = 1;

  Vec3 position() const { return {world_from_camera[3], world_from_camera[7], world_from_camera[11]}; }

  /// Throws ValidationError unless the rotation block is orthonormal with
  /// determinant +1 (within tol), the last row is [0,0,0,1], focal > 0 and
  /// the image is non-empty.
  void validate(double tol = 1e-8) const;

  /// Camera at `eye` aimed at `target`, world +y as the up hint.
  static Camera look_at(const Vec3& eye, const Vec3& target, double focal, std::size_t width,
                        std::size_t height);
};

struct PixelId {
  std::size_t row = 0;
  std::size_t col = 0;
  bool operator==(const PixelId&) const = default;
};

struct RayBatch {
  std::vector<Vec3> origins;
  std::vector<Vec3> directions;  // unit length
  std::vector<PixelId> pixels;

  std::size_t size() const { return origins.size(); }
};

/// Ray points fed to the model: points is [rays, samples, 6] holding
/// (x, y, z, dx, dy, dz); t and deltas are [rays, samples].
struct RayPointBatch {
  Tensor points;
  Tensor t;
  Tensor deltas;

  std::size_t rays() const { return points.dim(0); }
  std::size_t samples() const { return points.dim(1); }
};

struct Sampling {
  bool stratified = false;
  std::uint64_t seed = 0;

  static Sampling midpoint() { return {}; }
  static Sampling jittered(std::uint64_t seed) { return {true, seed}; }
};

RayBatch generate_rays(const Camera& camera, const std::vector<PixelId>& pixels);

/// Uniform samples per ray in [near, far): bin midpoints, or one seeded
/// uniform draw per equal-width bin. The final gap runs to `far`.
RayPointBatch sample_ray_points(const RayBatch& rays, double near, double far,
                                std::size_t n_samples, Sampling mode);

}  // namespace seqview
