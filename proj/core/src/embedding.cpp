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

#include "seqview/embedding.hpp"

#include <cmath>
#include <numbers>

#include "seqview/error.hpp"
#include "seqview/ops.hpp"

namespace seqview {

Tensor cos_embed(const Tensor& points, std::size_t n_freq_pos, std::size_t n_freq_dir) {
  if (points.shape().back() != 6) {
    throw ShapeError("cos_embed expects [..., 6] ray points, got " + shape_string(points.shape()));
  }
  const std::size_t width = cos_embed_dim(n_freq_pos, n_freq_dir);
  const std::size_t count = points.numel() / 6;
  const auto src = points.values();
  std::vector<double> out(count * width);
  for (std::size_t p = 0; p < count; ++p) {
    const double* x = src.data() + p * 6;
    double* y = out.data() + p * width;
    for (int c = 0; c < 6; ++c) *y++ = x[c];
    for (int c = 0; c < 6; ++c) {
      const std::size_t n_freq = c < 3 ? n_freq_pos : n_freq_dir;
      double freq = std::numbers::pi;
      for (std::size_t k = 0; k < n_freq; ++k) {
        *y++ = std::sin(freq * x[c]);
        *y++ = std::cos(freq * x[c]);
        freq *= 2.0;
      }
    }
  }
  Shape shape = points.shape();
  shape.back() = width;
  return Tensor(std::move(shape), std::move(out));
}

EmbedderParams EmbedderParams::init(std::size_t d, std::size_t n_freq_pos,
                                    std::size_t n_freq_dir, Rng& rng) {
  EmbedderParams params;
  params.mlp_hidden = Linear::init(6, d, rng);
  params.mlp_out = Linear::init(d, d, rng);
  params.proj = Linear::init(cos_embed_dim(n_freq_pos, n_freq_dir), d, rng);
  params.n_freq_pos = n_freq_pos;
  params.n_freq_dir = n_freq_dir;
  return params;
}

void EmbedderParams::collect(const std::string& prefix, ParameterList& out) const {
  mlp_hidden.collect(prefix + ".mlp_hidden", out);
  mlp_out.collect(prefix + ".mlp_out", out);
  proj.collect(prefix + ".proj", out);
}

Tensor embed(const Tensor& points, const EmbedderParams& params) {
  if (params.proj.in_features() != cos_embed_dim(params.n_freq_pos, params.n_freq_dir) ||
      params.proj.out_features() != params.dim() ||
      params.mlp_hidden.in_features() != 6) {
    throw ShapeError("embedder parameters are inconsistent with frequency counts or width");
  }
  Tensor gate = params.mlp_out(relu(params.mlp_hidden(points)));
  Tensor encoded = params.proj(cos_embed(points, params.n_freq_pos, params.n_freq_dir));
  return mul(gate, encoded);
}

}  // namespace seqview
