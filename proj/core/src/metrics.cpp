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

#include "seqview/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "seqview/error.hpp"

namespace seqview {

namespace {

void check_pair(const Image& a, const Image& b, const char* what) {
  if (a.height != b.height || a.width != b.width || a.pixels.size() != b.pixels.size()) {
    throw ShapeError(std::string(what) + ": image sizes differ (" + std::to_string(a.height) +
                     "x" + std::to_string(a.width) + " vs " + std::to_string(b.height) + "x" +
                     std::to_string(b.width) + ")");
  }
}

std::vector<double> grayscale(const Image& img) {
  std::vector<double> gray(img.height * img.width);
  for (std::size_t i = 0; i < gray.size(); ++i) {
    gray[i] = (img.pixels[i * 3] + img.pixels[i * 3 + 1] + img.pixels[i * 3 + 2]) / 3.0;
  }
  return gray;
}

std::vector<double> gaussian_window(std::size_t size, double sigma) {
  std::vector<double> w(size * size);
  const double center = static_cast<double>(size - 1) / 2.0;
  double total = 0.0;
  for (std::size_t y = 0; y < size; ++y) {
    for (std::size_t x = 0; x < size; ++x) {
      const double dy = static_cast<double>(y) - center;
      const double dx = static_cast<double>(x) - center;
      const double v = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      w[y * size + x] = v;
      total += v;
    }
  }
  for (auto& v : w) v /= total;
  return w;
}

}  // namespace

double mse(const Image& image, const Image& reference) {
  check_pair(image, reference, "mse");
  double total = 0.0;
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    const double e = image.pixels[i] - reference.pixels[i];
    total += e * e;
  }
  return total / static_cast<double>(image.pixels.size());
}

double psnr_from_mse(double err) {
  if (!(err >= 0.0)) throw DomainError("psnr: negative or NaN error " + std::to_string(err));
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(err);
}

double psnr(const Image& image, const Image& reference) {
  return psnr_from_mse(mse(image, reference));
}

double ssim(const Image& image, const Image& reference) {
  check_pair(image, reference, "ssim");
  const std::size_t side = std::min(image.height, image.width);
  const std::size_t win = side >= 11 ? 11 : 7;
  if (side < win) {
    throw DomainError("ssim: image " + std::to_string(image.height) + "x" +
                      std::to_string(image.width) + " is smaller than the " +
                      std::to_string(win) + "x" + std::to_string(win) + " window");
  }
  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;
  const auto w = gaussian_window(win, 1.5);
  const auto x = grayscale(image);
  const auto y = grayscale(reference);
  const std::size_t width = image.width;

  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t r = 0; r + win <= image.height; ++r) {
    for (std::size_t c = 0; c + win <= width; ++c) {
      double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
      for (std::size_t i = 0; i < win; ++i) {
        for (std::size_t j = 0; j < win; ++j) {
          const double wt = w[i * win + j];
          const double a = x[(r + i) * width + c + j];
          const double b = y[(r + i) * width + c + j];
          mx += wt * a;
          my += wt * b;
          sxx += wt * (a * a);
          syy += wt * (b * b);
          sxy += wt * (a * b);
        }
      }
      const double vx = sxx - mx * mx;
      const double vy = syy - my * my;
      const double cov = sxy - mx * my;
      total += ((2.0 * (mx * my) + c1) * (2.0 * cov + c2)) /
               ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

}  // namespace seqview
