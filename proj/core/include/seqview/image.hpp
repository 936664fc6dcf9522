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
#include <filesystem>
#include <vector>

namespace seqview {

/// Row-major RGB image with components in [0, 1].
struct Image {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> pixels;  // height * width * 3

  Image() = default;
  Image(std::size_t height, std::size_t width, double fill = 0.0)
      : height(height), width(width), pixels(height * width * 3, fill) {}

  double& at(std::size_t row, std::size_t col, std::size_t channel) {
    return pixels[(row * width + col) * 3 + channel];
  }
  double at(std::size_t row, std::size_t col, std::size_t channel) const {
    return pixels[(row * width + col) * 3 + channel];
  }
  bool operator==(const Image&) const = default;
};

/// Byte value for a component: round(v * 255) clamped to [0, 255], halves
/// rounding up.
unsigned char quantize(double v);

/// Writes an 8-bit RGB PNG via a temporary file and rename.
void write_image(const Image& image, const std::filesystem::path& path);

/// Reads a PNG. Alpha, when present, is composited onto a white background.
Image read_image(const std::filesystem::path& path);

}  // namespace seqview
