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

#include "seqview/model.hpp"

#include <cmath>

#include "seqview/error.hpp"
#include "seqview/ops.hpp"

namespace seqview {

namespace {

struct VariantName {
  Variant variant;
  std::string_view name;
};

constexpr VariantName kVariantNames[] = {
    {Variant::vania, "vania"}, {Variant::nerfa, "nerfa"}, {Variant::no_fm, "no_fm"},
    {Variant::no_rt, "no_rt"}, {Variant::no_pt, "no_pt"}, {Variant::nerf, "nerf"},
};

bool uses_ray_blocks(Variant v) {
  return v == Variant::vania || v == Variant::nerfa || v == Variant::no_fm || v == Variant::no_pt;
}

bool uses_pixel_blocks(Variant v) {
  return v == Variant::nerfa || v == Variant::no_fm || v == Variant::no_rt;
}

void check_features(const Tensor& features, const char* what) {
  if (features.rank() != 3) {
    throw ShapeError(std::string(what) + " expects [N_p, N_r, d], got " +
                     shape_string(features.shape()));
  }
}

}  // namespace

std::string_view variant_name(Variant v) {
  for (const auto& entry : kVariantNames) {
    if (entry.variant == v) return entry.name;
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  for (const auto& entry : kVariantNames) {
    if (entry.name == name) return entry.variant;
  }
  throw ConfigError("unknown variant '" + std::string(name) + "'");
}

const std::vector<Variant>& ablation_variants() {
  static const std::vector<Variant> order{Variant::nerfa, Variant::vania, Variant::no_fm,
                                          Variant::no_rt, Variant::no_pt};
  return order;
}

void ModelConfig::validate() const {
  if (d == 0) throw ConfigError("d must be positive");
  if (layers == 0) throw ConfigError("layers must be at least 1");
  if (heads == 0 || d % heads != 0) {
    throw ConfigError("d=" + std::to_string(d) + " is not divisible by heads=" +
                      std::to_string(heads));
  }
  if (attention_mode == AttentionMode::literal && heads != 1) {
    throw ConfigError("literal attention requires heads=1");
  }
}

NeRFAModel NeRFAModel::create(const ModelConfig& config) {
  config.validate();
  Rng rng(config.seed);
  NeRFAModel model;
  model.config = config;
  const Variant v = config.variant;
  if (v == Variant::nerf) {
    // Radiance MLP reads the frequency encoding directly.
    std::size_t in = cos_embed_dim(config.n_freq_pos, config.n_freq_dir);
    for (std::size_t l = 0; l < kRadianceDepth; ++l) {
      model.radiance.push_back(Linear::init(in, config.d, rng));
      in = config.d;
    }
    model.radiance_sigma = Linear::init(config.d, 1, rng);
    model.radiance_color = Linear::init(config.d, 3, rng);
    return model;
  }
  model.embedder = EmbedderParams::init(config.d, config.n_freq_pos, config.n_freq_dir, rng);
  if (uses_ray_blocks(v)) {
    model.ray_blocks =
        BlockParams::init(config.d, config.heads, config.layers, config.attention_mode, rng);
  }
  if (uses_pixel_blocks(v)) {
    model.pixel_blocks =
        BlockParams::init(config.d, config.heads, config.layers, config.attention_mode, rng);
  }
  model.head = Linear::init(config.d, 3, rng);
  return model;
}

ParameterList NeRFAModel::parameters() const {
  ParameterList out;
  if (config.variant == Variant::nerf) {
    for (std::size_t l = 0; l < radiance.size(); ++l) {
      radiance[l].collect("radiance." + std::to_string(l), out);
    }
    radiance_sigma.collect("radiance.sigma", out);
    radiance_color.collect("radiance.color", out);
    return out;
  }
  embedder.collect("embedder", out);
  ray_blocks.collect(config.variant == Variant::vania ? "global" : "ray", out);
  pixel_blocks.collect("pixel", out);
  head.collect("head", out);
  return out;
}

std::size_t NeRFAModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : parameters()) n += p.tensor.numel();
  return n;
}

Tensor ray_transformer(const Tensor& embedded, const BlockParams& params) {
  check_features(embedded, "ray_transformer");
  return transformer_block(embedded, params, AttentionScope::ray);
}

Tensor global_transformer(const Tensor& embedded, const BlockParams& params) {
  check_features(embedded, "global_transformer");
  const Shape shape = embedded.shape();
  Tensor tokens = reshape(embedded, {1, shape[0] * shape[1], shape[2]});
  return reshape(transformer_block(tokens, params, AttentionScope::global), shape);
}

Tensor feature_modulation(const Tensor& features, const Tensor& deltas) {
  check_features(features, "feature_modulation");
  if (deltas.shape() != Shape{features.dim(0), features.dim(1)}) {
    throw ShapeError("feature_modulation: gaps " + shape_string(deltas.shape()) +
                     " do not match features " + shape_string(features.shape()));
  }
  Tensor gaps = repeat_last(deltas, features.dim(2));
  Tensor optical = mul(features, gaps);
  Tensor transmittance = exp(negate(cumsum(optical, 1, true)));
  Tensor opacity = add_scalar(negate(exp(negate(optical))), 1.0);
  return sum(mul(mul(transmittance, opacity), features), 1);
}

Tensor pixel_transformer(const Tensor& modulated, const BlockParams& params) {
  if (modulated.rank() != 2) {
    throw ShapeError("pixel_transformer expects [N_p, d], got " +
                     shape_string(modulated.shape()));
  }
  return transformer_block(modulated, params, AttentionScope::pixel);
}

Tensor volume_render(const Tensor& sigma, const Tensor& color, const Tensor& deltas) {
  if (sigma.rank() != 2 || deltas.shape() != sigma.shape() ||
      color.shape() != Shape{sigma.dim(0), sigma.dim(1), 3}) {
    throw ShapeError("volume_render: sigma " + shape_string(sigma.shape()) + ", color " +
                     shape_string(color.shape()) + ", gaps " + shape_string(deltas.shape()));
  }
  Tensor optical = mul(sigma, deltas);
  Tensor transmittance = exp(negate(cumsum(optical, 1, true)));
  Tensor opacity = add_scalar(negate(exp(negate(optical))), 1.0);
  Tensor weights = repeat_last(mul(transmittance, opacity), 3);
  return sum(mul(weights, color), 1);
}

Tensor forward(const NeRFAModel& model, const RayPointBatch& batch) {
  const ModelConfig& cfg = model.config;
  if (batch.points.rank() != 3 || batch.points.dim(2) != 6) {
    throw ShapeError("forward expects ray points [N_p, N_r, 6], got " +
                     shape_string(batch.points.shape()));
  }

  if (cfg.variant == Variant::nerf) {
    Tensor h = cos_embed(batch.points, cfg.n_freq_pos, cfg.n_freq_dir);
    for (const auto& layer : model.radiance) h = relu(layer(h));
    const std::size_t n_p = batch.rays();
    const std::size_t n_r = batch.samples();
    Tensor sigma = reshape(relu(model.radiance_sigma(h)), {n_p, n_r});
    Tensor color = sigmoid(model.radiance_color(h));
    return volume_render(sigma, color, batch.deltas);
  }

  Tensor embedded = embed(batch.points, model.embedder);
  Tensor pooled;
  switch (cfg.variant) {
    case Variant::vania:
      pooled = mean(global_transformer(embedded, model.ray_blocks), 1);
      break;
    case Variant::nerfa:
      pooled = pixel_transformer(
          feature_modulation(ray_transformer(embedded, model.ray_blocks), batch.deltas),
          model.pixel_blocks);
      break;
    case Variant::no_fm:
      pooled = pixel_transformer(mean(ray_transformer(embedded, model.ray_blocks), 1),
                                 model.pixel_blocks);
      break;
    case Variant::no_rt:
      pooled = pixel_transformer(feature_modulation(embedded, batch.deltas), model.pixel_blocks);
      break;
    case Variant::no_pt:
      pooled = feature_modulation(ray_transformer(embedded, model.ray_blocks), batch.deltas);
      break;
    case Variant::nerf:
      break;
  }
  return sigmoid(model.head(pooled));
}

Tensor nerf_render(const SigmaColorField& field) {
  const auto& shape = field.sigma.shape();
  if (shape.size() != 2 || field.deltas.shape() != shape ||
      field.color.shape() != Shape{shape[0], shape[1], 3}) {
    throw ShapeError("nerf_render: inconsistent field shapes");
  }
  const std::size_t n_p = shape[0];
  const std::size_t n_r = shape[1];
  const auto sigma = field.sigma.values();
  const auto color = field.color.values();
  const auto deltas = field.deltas.values();
  for (double s : sigma) {
    if (!(s >= 0.0)) throw DomainError("nerf_render: negative density " + std::to_string(s));
  }
  std::vector<double> out(n_p * 3, 0.0);
  for (std::size_t p = 0; p < n_p; ++p) {
    double optical_depth = 0.0;
    for (std::size_t i = 0; i < n_r; ++i) {
      const std::size_t idx = p * n_r + i;
      const double local = sigma[idx] * deltas[idx];
      const double weight = std::exp(-optical_depth) * (1.0 - std::exp(-local));
      for (std::size_t c = 0; c < 3; ++c) out[p * 3 + c] += weight * color[idx * 3 + c];
      optical_depth += local;
    }
  }
  return Tensor({n_p, 3}, std::move(out));
}

MaddCounters count_madds(const ModelConfig& config, std::size_t n_rays, std::size_t n_samples) {
  const std::uint64_t d = config.d;
  const std::uint64_t layers = config.layers;
  const std::uint64_t n_p = n_rays;
  const std::uint64_t n_r = n_samples;
  MaddCounters c;
  c.global = layers * 2 * (n_p * n_r) * (n_p * n_r) * d;
  c.ray = layers * n_p * 2 * n_r * n_r * d;
  c.pixel = layers * 2 * n_p * n_p * d;
  return c;
}

}  // namespace seqview
