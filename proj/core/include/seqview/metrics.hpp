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

#include "seqview/image.hpp"

namespace seqview {

double mse(const Image& image, const Image& reference);

/// -10 log10(err); zero error gives +infinity.
double psnr_from_mse(double err);

/// Peak signal-to-noise ratio in dB for unit peak. Identical images give
/// +infinity.
double psnr(const Image& image, const Image& reference);

/// Mean structural similarity of the channel-mean grayscale images, using a
/// Gaussian window (sigma 1.5) of 11x11, or 7x7 when the smaller image side
/// is below 11. K1 = 0.01, K2 = 0.03, unit peak. Throws DomainError when
/// the image is smaller than the window.
double ssim(const Image& image, const Image& reference);

}  // namespace seqview
