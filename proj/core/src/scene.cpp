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

#include "seqview/scene.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <string>

#include <nlohmann/json.hpp>

#include "seqview/error.hpp"
#include "seqview/random.hpp"

namespace seqview {

namespace {

using nlohmann::json;

constexpr double kLoaderRotationTolerance = 1e-4;

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

Mat4 parse_matrix(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 4) {
    throw ValidationError(where + ": transform_matrix must be 4x4");
  }
  Mat4 m{};
  for (std::size_t r = 0; r < 4; ++r) {
    const json& row = value[r];
    if (!row.is_array() || row.size() != 4) {
      throw ValidationError(where + ": transform_matrix must be 4x4");
    }
    for (std::size_t c = 0; c < 4; ++c) {
      if (!row[c].is_number()) throw ValidationError(where + ": non-numeric matrix entry");
      m[r * 4 + c] = row[c].get<double>();
    }
  }
  return m;
}

std::filesystem::path frame_image_path(const std::filesystem::path& dir, std::string file) {
  std::filesystem::path p = dir / file;
  if (!p.has_extension()) p += ".png";
  return p;
}

}  // namespace

std::string_view split_name(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
  }
  return "unknown";
}

std::vector<std::size_t> Scene::indices(Split split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < views.size(); ++i) {
    if (views[i].split == split) out.push_back(i);
  }
  return out;
}

void Scene::validate() const {
  if (!(near < far)) throw ValidationError("scene near bound must be below far bound");
  if (views.empty()) throw ValidationError("scene has no views");
  const auto h = views.front().image.height;
  const auto w = views.front().image.width;
  bool has_train = false;
  for (const auto& v : views) {
    if (v.image.height != h || v.image.width != w) {
      throw ValidationError("scene images have differing dimensions");
    }
    if (v.camera.width != w || v.camera.height != h) {
      throw ValidationError("camera resolution does not match its image");
    }
    has_train = has_train || v.split == Split::train;
  }
  if (!has_train) throw ValidationError("scene has no training views");
}

Scene load_blender_dataset(const std::filesystem::path& dir, double near, double far) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("dataset directory not found: " + dir.string());
  }
  Scene scene;
  scene.near = near;
  scene.far = far;
  for (Split split : {Split::train, Split::val, Split::test}) {
    const auto path = dir / ("transforms_" + std::string(split_name(split)) + ".json");
    const json doc = read_json(path);
    if (!doc.contains("camera_angle_x") || !doc["camera_angle_x"].is_number()) {
      throw ValidationError(path.string() + ": missing camera_angle_x");
    }
    if (!doc.contains("frames") || !doc["frames"].is_array()) {
      throw ValidationError(path.string() + ": missing frames list");
    }
    const double angle = doc["camera_angle_x"].get<double>();
    std::size_t index = 0;
    for (const json& frame : doc["frames"]) {
      const std::string where = path.string() + " frame " + std::to_string(index++);
      if (!frame.contains("file_path") || !frame["file_path"].is_string() ||
          !frame.contains("transform_matrix")) {
        throw ValidationError(where + ": needs file_path and transform_matrix");
      }
      View view;
      view.split = split;
      view.camera.world_from_camera = parse_matrix(frame["transform_matrix"], where);
      view.image = read_image(frame_image_path(dir, frame["file_path"].get<std::string>()));
      view.camera.width = view.image.width;
      view.camera.height = view.image.height;
      view.camera.focal =
          0.5 * static_cast<double>(view.image.width) / std::tan(0.5 * angle);
      try {
        view.camera.validate(kLoaderRotationTolerance);
      } catch (const ValidationError& e) {
        throw ValidationError(where + ": " + e.what());
      }
      scene.views.push_back(std::move(view));
    }
  }
  scene.validate();
  return scene;
}

ToySceneConfig default_toy_config() {
  ToySceneConfig cfg;
  cfg.spheres = {
      {{0.0, 0.0, 0.0}, 0.6, {0.9, 0.2, 0.2}},
      {{0.7, 0.35, -0.3}, 0.35, {0.2, 0.7, 0.3}},
      {{-0.6, -0.3, 0.4}, 0.4, {0.2, 0.3, 0.9}},
  };
  return cfg;
}

std::optional<double> intersect_sphere(const Vec3& origin, const Vec3& direction,
                                       const Sphere& sphere) {
  const Vec3 oc{origin[0] - sphere.center[0], origin[1] - sphere.center[1],
                origin[2] - sphere.center[2]};
  const double b = oc[0] * direction[0] + oc[1] * direction[1] + oc[2] * direction[2];
  const double c = oc[0] * oc[0] + oc[1] * oc[1] + oc[2] * oc[2] - sphere.radius * sphere.radius;
  const double disc = b * b - c;
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  double t = -b - root;
  if (t <= 0.0) t = -b + root;
  if (t <= 0.0) return std::nullopt;
  return t;
}

Scene generate_toy_scene(std::uint64_t seed, const ToySceneConfig& config) {
  if (config.image_size < 8) throw DomainError("toy scene image_size must be at least 8");
  if (config.n_views < 2) throw DomainError("toy scene needs at least 2 views");
  if (config.n_train < 1 || config.n_train > config.n_views) {
    throw DomainError("toy scene n_train must be in [1, n_views]");
  }
  std::vector<Sphere> spheres = config.spheres;
  Rng rng(seed);
  for (std::size_t i = 0; i < config.n_random_spheres; ++i) {
    Sphere s;
    for (auto& c : s.center) c = rng.uniform(-0.8, 0.8);
    s.radius = rng.uniform(0.2, 0.5);
    for (auto& c : s.color) c = rng.uniform();
    spheres.push_back(s);
  }

  const std::size_t size = config.image_size;
  const double focal =
      0.5 * static_cast<double>(size) / std::tan(0.5 * config.camera_angle_x);
  std::vector<PixelId> pixels;
  pixels.reserve(size * size);
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t c = 0; c < size; ++c) pixels.push_back({r, c});
  }

  Scene scene;
  scene.near = config.near;
  scene.far = config.far;
  for (std::size_t k = 0; k < config.n_views; ++k) {
    const double theta =
        2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(config.n_views);
    const Vec3 eye{config.ring_radius * std::sin(theta), config.ring_height,
                   config.ring_radius * std::cos(theta)};
    View view;
    view.camera = Camera::look_at(eye, {0.0, 0.0, 0.0}, focal, size, size);
    if (k < config.n_train) {
      view.split = Split::train;
    } else {
      view.split = (k - config.n_train) % 2 == 0 ? Split::val : Split::test;
    }
    view.image = Image(size, size, 1.0);
    const RayBatch rays = generate_rays(view.camera, pixels);
    for (std::size_t i = 0; i < rays.size(); ++i) {
      double nearest = std::numeric_limits<double>::infinity();
      const Sphere* hit = nullptr;
      for (const auto& s : spheres) {
        if (auto t = intersect_sphere(rays.origins[i], rays.directions[i], s); t && *t < nearest) {
          nearest = *t;
          hit = &s;
        }
      }
      if (hit) {
        for (std::size_t c = 0; c < 3; ++c) view.image.at(pixels[i].row, pixels[i].col, c) = hit->color[c];
      }
    }
    scene.views.push_back(std::move(view));
  }
  scene.validate();
  return scene;
}

}  // namespace seqview
