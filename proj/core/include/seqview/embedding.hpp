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

#include "seqview/layers.hpp"
#include "seqview/rays.hpp"

namespace seqview {

/// Width of the frequency encoding: 6 raw inputs plus a sin/cos pair per
/// coordinate and frequency.
constexpr std::size_t cos_embed_dim(std::size_t n_freq_pos, std::size_t n_freq_dir) {
  return 6 + 6 * n_freq_pos + 6 * n_freq_dir;
}

/// Frequency encoding of ray points [..., 6]. Channel layout: the 6 raw
/// inputs, then for each position coordinate and k < n_freq_pos the pair
/// (sin(2^k pi x), cos(2^k pi x)), then the same for the direction
/// coordinates with n_freq_dir. Treats the points as data (no gradient).
Tensor cos_embed(const Tensor& points, std::size_t n_freq_pos, std::size_t n_freq_dir);

inline Tensor cos_embed(const RayPointBatch& batch, std::size_t n_freq_pos,
                        std::size_t n_freq_dir) {
  return cos_embed(batch.points, n_freq_pos, n_freq_dir);
}

struct EmbedderParams {
  Linear mlp_hidden;  // 6 -> d, followed by ReLU
  Linear mlp_out;     // d -> d
  Linear proj;        // cos_embed_dim -> d
  std::size_t n_freq_pos = 0;
  std::size_t n_freq_dir = 0;

  static EmbedderParams init(std::size_t d, std::size_t n_freq_pos, std::size_t n_freq_dir,
                             Rng& rng);

  std::size_t dim() const { return mlp_out.out_features(); }
  void collect(const std::string& prefix, ParameterList& out) const;
};

/// Point-wise MLP of the raw points, gated elementwise by the projected
/// frequency encoding. Output [..., d].
Tensor embed(const Tensor& points, const EmbedderParams& params);

inline Tensor embed(const RayPointBatch& batch, const EmbedderParams& params) {
  return embed(batch.points, params);
}

}  // namespace seqview
