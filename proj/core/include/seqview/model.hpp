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
#include <string>
#include <string_view>
#include <vector>

#include "seqview/attention.hpp"
#include "seqview/embedding.hpp"
#include "seqview/rays.hpp"

namespace seqview {

enum class Variant {
  vania,  // global transformer over every ray point, mean over each ray
  nerfa,  // ray transformer -> feature modulation -> pixel transformer
  no_fm,  // feature modulation replaced by mean pooling
  no_rt,  // embeddings go straight to feature modulation
  no_pt,  // modulated features go straight to the color head
  nerf,   // radiance MLP + explicit volume rendering baseline
};

std::string_view variant_name(Variant v);
/// Throws ConfigError for unknown names.
Variant parse_variant(std::string_view name);

/// The five attention variants compared in ablations, in table order.
const std::vector<Variant>& ablation_variants();

struct ModelConfig {
  Variant variant = Variant::nerfa;
  std::size_t d = 64;
  std::size_t heads = 8;
  std::size_t layers = 1;
  std::size_t n_freq_pos = 10;
  std::size_t n_freq_dir = 4;
  AttentionMode attention_mode = AttentionMode::projected;
  std::uint64_t seed = 0;

  /// Throws ConfigError when d % heads != 0, layers == 0 or d == 0.
  void validate() const;
  bool operator==(const ModelConfig&) const = default;
};

inline constexpr std::size_t kRadianceDepth = 8;

/// Learnable parameters for every variant. Stages a variant does not use are
/// left empty, so the parameter count is a function of the config alone.
struct NeRFAModel {
  ModelConfig config;
  EmbedderParams embedder;
  BlockParams ray_blocks;    // the global transformer for vania
  BlockParams pixel_blocks;
  Linear head;               // d -> 3, then sigmoid
  std::vector<Linear> radiance;  // nerf baseline: hidden layers
  Linear radiance_sigma;
  Linear radiance_color;

  static NeRFAModel create(const ModelConfig& config);

  /// Stable, ordered parameter list shared by the optimizer and checkpoints.
  ParameterList parameters() const;
  std::size_t parameter_count() const;
};

/// Transformer block applied to each ray's [N_r, d] slice with shared weights.
Tensor ray_transformer(const Tensor& embedded, const BlockParams& params);

/// Transformer block over all N_p * N_r ray points as one sequence.
Tensor global_transformer(const Tensor& embedded, const BlockParams& params);

/// Latent volume rendering of per-point features [N_p, N_r, d] with gaps
/// [N_p, N_r] into per-ray features [N_p, d]:
///   sum_i exp(-sum_{j<i} delta_j f_j) * (1 - exp(-delta_i f_i)) * f_i
/// elementwise over channels.
Tensor feature_modulation(const Tensor& features, const Tensor& deltas);

/// Transformer block across the N_p per-pixel features [N_p, d].
Tensor pixel_transformer(const Tensor& modulated, const BlockParams& params);

/// Colors [N_p, 3] in (0, 1) for the ray points in `batch`.
Tensor forward(const NeRFAModel& model, const RayPointBatch& batch);

/// Explicit densities, colors and gaps along each ray.
struct SigmaColorField {
  Tensor sigma;   // [N_p, N_r], >= 0
  Tensor color;   // [N_p, N_r, 3], in [0, 1]
  Tensor deltas;  // [N_p, N_r], > 0
};

/// Classical volume rendering by direct summation; throws DomainError on
/// negative densities.
Tensor nerf_render(const SigmaColorField& field);

/// Differentiable volume rendering, the same sum built from tensor ops.
Tensor volume_render(const Tensor& sigma, const Tensor& color, const Tensor& deltas);

/// Attention score + value multiply-adds per stage for one forward pass.
/// Global is what a single transformer over all N_p * N_r points costs.
MaddCounters count_madds(const ModelConfig& config, std::size_t n_rays, std::size_t n_samples);

}  // namespace seqview
