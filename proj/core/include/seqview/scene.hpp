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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "seqview/image.hpp"
#include "seqview/rays.hpp"

namespace seqview {

enum class Split { train, val, test };

std::string_view split_name(Split split);

struct View {
  Camera camera;
  Image image;
  Split split = Split::train;
};

struct Scene {
  std::vector<View> views;
  double near = 2.0;
  double far = 6.0;

  std::vector<std::size_t> indices(Split split) const;
  /// Throws ValidationError unless views share dimensions, near < far and
  /// at least one view is tagged train.
  void validate() const;
};

/// Reads transforms_{train,val,test}.json plus the referenced images.
/// Cameras whose rotation deviates from orthonormal by more than 1e-4 are
/// rejected. RGBA images are composited onto white.
Scene load_blender_dataset(const std::filesystem::path& dir, double near = 2.0,
                           double far = 6.0);

struct Sphere {
  Vec3 center{0.0, 0.0, 0.0};
  double radius = 0.5;
  Vec3 color{1.0, 1.0, 1.0};
};

struct ToySceneConfig {
  std::size_t image_size = 16;
  std::size_t n_views = 6;
  std::size_t n_train = 4;   // the first n_train views; the rest alternate val/test
  double ring_radius = 4.0;
  double ring_height = 0.0;
  double camera_angle_x = 0.6911112;
  std::vector<Sphere> spheres;
  std::size_t n_random_spheres = 0;  // drawn from the seed, appended to spheres
  double near = 2.0;
  double far = 6.0;
};

/// The standard three-sphere toy scene used by the CLI and the ablation.
ToySceneConfig default_toy_config();

/// Opaque flat-colored spheres on white, seen from cameras on a ring around
/// the y axis looking at the origin (view 0 sits on +z). Each pixel takes
/// the color of the nearest sphere its center ray hits.
Scene generate_toy_scene(std::uint64_t seed, const ToySceneConfig& config);

/// Exact ray/sphere hit distance, if the ray hits in front of its origin.
std::optional<double> intersect_sphere(const Vec3& origin, const Vec3& direction,
                                       const Sphere& sphere);

}  // namespace seqview
