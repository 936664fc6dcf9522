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

#include "seqview/rays.hpp"

#include <cmath>
#include <string>

#include "seqview/error.hpp"
#include "seqview/random.hpp"

namespace seqview {

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

Vec3 normalize(const Vec3& v) {
  const double n = norm(v);
  return {v[0] / n, v[1] / n, v[2] / n};
}

namespace {

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

void Camera::validate(double tol) const {
  const auto& m = world_from_camera;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 3; ++k) dot += m[k * 4 + i] * m[k * 4 + j];
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(dot - expected) > tol) {
        throw ValidationError("camera rotation is not orthonormal (column dot " +
                              std::to_string(i) + "," + std::to_string(j) + " = " +
                              std::to_string(dot) + ")");
      }
    }
  }
  const double det = m[0] * (m[5] * m[10] - m[6] * m[9]) - m[1] * (m[4] * m[10] - m[6] * m[8]) +
                     m[2] * (m[4] * m[9] - m[5] * m[8]);
  if (std::abs(det - 1.0) > tol) {
    throw ValidationError("camera rotation determinant is " + std::to_string(det) + ", expected +1");
  }
  if (std::abs(m[12]) > tol || std::abs(m[13]) > tol || std::abs(m[14]) > tol ||
      std::abs(m[15] - 1.0) > tol) {
    throw ValidationError("camera transform last row must be [0, 0, 0, 1]");
  }
  if (!(focal > 0.0)) throw ValidationError("camera focal length must be positive");
  if (width < 1 || height < 1) throw ValidationError("camera image must be at least 1x1");
}

Camera Camera::look_at(const Vec3& eye, const Vec3& target, double focal, std::size_t width,
                       std::size_t height) {
  const Vec3 back = normalize({eye[0] - target[0], eye[1] - target[1], eye[2] - target[2]});
  Vec3 up{0.0, 1.0, 0.0};
  if (std::abs(back[1]) > 1.0 - 1e-9) up = {0.0, 0.0, -1.0};
  const Vec3 right = normalize(cross(up, back));
  const Vec3 true_up = cross(back, right);
  Camera cam;
  cam.world_from_camera = {right[0], true_up[0], back[0], eye[0],  //
                           right[1], true_up[1], back[1], eye[1],  //
                           right[2], true_up[2], back[2], eye[2],  //
                           0.0,      0.0,        0.0,     1.0};
  cam.focal = focal;
  cam.width = width;
  cam.height = height;
  return cam;
}

RayBatch generate_rays(const Camera& camera, const std::vector<PixelId>& pixels) {
  RayBatch batch;
  batch.origins.reserve(pixels.size());
  batch.directions.reserve(pixels.size());
  batch.pixels = pixels;
  const auto& m = camera.world_from_camera;
  const Vec3 origin = camera.position();
  const double half_w = 0.5 * static_cast<double>(camera.width);
  const double half_h = 0.5 * static_cast<double>(camera.height);
  for (const auto& px : pixels) {
    if (px.row >= camera.height || px.col >= camera.width) {
      throw BoundsError("pixel (" + std::to_string(px.row) + ", " + std::to_string(px.col) +
                        ") outside " + std::to_string(camera.height) + "x" +
                        std::to_string(camera.width) + " image");
    }
    const Vec3 local{(static_cast<double>(px.col) + 0.5 - half_w) / camera.focal,
                     -(static_cast<double>(px.row) + 0.5 - half_h) / camera.focal, -1.0};
    const Vec3 world{m[0] * local[0] + m[1] * local[1] + m[2] * local[2],
                     m[4] * local[0] + m[5] * local[1] + m[6] * local[2],
                     m[8] * local[0] + m[9] * local[1] + m[10] * local[2]};
    batch.origins.push_back(origin);
    batch.directions.push_back(normalize(world));
  }
  return batch;
}

RayPointBatch sample_ray_points(const RayBatch& rays, double near, double far,
                                std::size_t n_samples, Sampling mode) {
  if (!(near >= 0.0) || !(near < far)) {
    throw DomainError("sampling bounds need 0 <= near < far, got near=" + std::to_string(near) +
                      " far=" + std::to_string(far));
  }
  if (n_samples < 1) throw DomainError("need at least one sample per ray");
  if (rays.size() < 1) throw DomainError("need at least one ray");

  const std::size_t n_rays = rays.size();
  const double width = (far - near) / static_cast<double>(n_samples);
  std::vector<double> points(n_rays * n_samples * 6);
  std::vector<double> t(n_rays * n_samples);
  std::vector<double> deltas(n_rays * n_samples);
  Rng rng(mode.seed);

  for (std::size_t r = 0; r < n_rays; ++r) {
    double* tr = t.data() + r * n_samples;
    for (std::size_t i = 0; i < n_samples; ++i) {
      const double lower = near + static_cast<double>(i) * width;
      if (mode.stratified) {
        const double upper = near + static_cast<double>(i + 1) * width;
        double v = lower + rng.uniform() * width;
        if (v >= upper) v = std::nextafter(upper, lower);
        tr[i] = v;
      } else {
        tr[i] = near + (static_cast<double>(i) + 0.5) * width;
      }
    }
    for (std::size_t i = 0; i < n_samples; ++i) {
      deltas[r * n_samples + i] = (i + 1 < n_samples ? tr[i + 1] : far) - tr[i];
    }
    const Vec3& o = rays.origins[r];
    const Vec3& d = rays.directions[r];
    for (std::size_t i = 0; i < n_samples; ++i) {
      double* p = points.data() + (r * n_samples + i) * 6;
      for (int k = 0; k < 3; ++k) {
        p[k] = o[k] + tr[i] * d[k];
        p[3 + k] = d[k];
      }
    }
  }
  return {Tensor({n_rays, n_samples, 6}, std::move(points)),
          Tensor({n_rays, n_samples}, std::move(t)),
          Tensor({n_rays, n_samples}, std::move(deltas))};
}

}  // namespace seqview
