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

#include "seqview/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "seqview/error.hpp"

namespace seqview {

unsigned char quantize(double v) {
  const double scaled = std::floor(v * 255.0 + 0.5);
  return static_cast<unsigned char>(std::clamp(scaled, 0.0, 255.0));
}

void write_image(const Image& image, const std::filesystem::path& path) {
  if (image.pixels.size() != image.height * image.width * 3 || image.height == 0 ||
      image.width == 0) {
    throw ShapeError("write_image: malformed image buffer");
  }
  std::vector<unsigned char> bytes(image.pixels.size());
  std::transform(image.pixels.begin(), image.pixels.end(), bytes.begin(), quantize);

  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = PNG_FORMAT_RGB;

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  if (!png_image_write_to_file(&png, tmp.c_str(), 0, bytes.data(), 0, nullptr)) {
    std::string reason = png.message;
    png_image_free(&png);
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot write image " + path.string() + ": " + reason);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot write image " + path.string() + ": " + ec.message());
  }
}

Image read_image(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw IoError("image not found: " + path.string());
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw FormatError("cannot read image " + path.string() + ": " + png.message);
  }
  png.format = PNG_FORMAT_RGBA;
  std::vector<unsigned char> rgba(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, rgba.data(), 0, nullptr)) {
    std::string reason = png.message;
    png_image_free(&png);
    throw FormatError("cannot decode image " + path.string() + ": " + reason);
  }
  Image image(png.height, png.width);
  for (std::size_t i = 0; i < image.height * image.width; ++i) {
    const double alpha = rgba[i * 4 + 3] / 255.0;
    for (std::size_t c = 0; c < 3; ++c) {
      image.pixels[i * 3 + c] = rgba[i * 4 + c] / 255.0 * alpha + (1.0 - alpha);
    }
  }
  return image;
}

}  // namespace seqview
