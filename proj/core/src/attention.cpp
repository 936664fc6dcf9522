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

#include "seqview/attention.hpp"

#include <cmath>

#include "seqview/error.hpp"
#include "seqview/ops.hpp"

namespace seqview {

namespace {

thread_local MaddCounters counters;

void record_madds(AttentionScope scope, std::uint64_t madds) {
  switch (scope) {
    case AttentionScope::global: counters.global += madds; break;
    case AttentionScope::ray: counters.ray += madds; break;
    case AttentionScope::pixel: counters.pixel += madds; break;
    case AttentionScope::other: counters.other += madds; break;
  }
}

Tensor identity_matrix(std::size_t d) {
  std::vector<double> v(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) v[i * d + i] = 1.0;
  return Tensor({d, d}, std::move(v), true);
}

struct Batched {
  Tensor x;  // [batch, n, d]
  std::size_t batch;
  std::size_t n;
  std::size_t d;
};

Batched as_batched(const Tensor& x) {
  if (x.rank() == 2) return {reshape(x, {1, x.dim(0), x.dim(1)}), 1, x.dim(0), x.dim(1)};
  if (x.rank() == 3) return {x, x.dim(0), x.dim(1), x.dim(2)};
  throw ShapeError("attention expects [n, d] or [batch, n, d], got " + shape_string(x.shape()));
}

// [batch, n, heads*dh] -> [batch*heads, n, dh]
Tensor split_heads(const Tensor& x, std::size_t batch, std::size_t n, std::size_t heads,
                   std::size_t dh) {
  if (heads == 1) return x;
  Tensor t = permute(reshape(x, {batch, n, heads, dh}), {0, 2, 1, 3});
  return reshape(t, {batch * heads, n, dh});
}

Tensor merge_heads(const Tensor& x, std::size_t batch, std::size_t n, std::size_t heads,
                   std::size_t dh) {
  if (heads == 1) return x;
  Tensor t = permute(reshape(x, {batch, heads, n, dh}), {0, 2, 1, 3});
  return reshape(t, {batch, n, heads * dh});
}

struct Projected {
  Tensor q, k, v;
  std::size_t dh;
};

Projected project(const Batched& in, const AttentionParams& params) {
  params.validate();
  if (in.d != params.dim) {
    throw ShapeError("attention width " + std::to_string(params.dim) + " does not match input " +
                     shape_string(in.x.shape()));
  }
  if (params.mode == AttentionMode::literal) return {in.x, in.x, in.x, in.d};
  const std::size_t dh = in.d / params.heads;
  return {split_heads(matmul(in.x, params.query), in.batch, in.n, params.heads, dh),
          split_heads(matmul(in.x, params.key), in.batch, in.n, params.heads, dh),
          split_heads(matmul(in.x, params.value), in.batch, in.n, params.heads, dh), dh};
}

Tensor scores_softmax(const Projected& p) {
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(p.dh));
  return softmax(scale(matmul_nt(p.q, p.k), inv_sqrt), 2);
}

}  // namespace

MaddCounters& madd_counters() { return counters; }

void reset_madd_counters() { counters = {}; }

AttentionParams AttentionParams::literal(std::size_t dim) {
  AttentionParams p;
  p.mode = AttentionMode::literal;
  p.dim = dim;
  p.heads = 1;
  return p;
}

AttentionParams AttentionParams::init(std::size_t dim, std::size_t heads, Rng& rng) {
  AttentionParams p;
  p.mode = AttentionMode::projected;
  p.dim = dim;
  p.heads = heads;
  if (heads == 0 || dim % heads != 0) {
    throw ConfigError("model width " + std::to_string(dim) + " is not divisible by " +
                      std::to_string(heads) + " heads");
  }
  const double bound = 1.0 / std::sqrt(static_cast<double>(dim));
  p.query = uniform_parameter({dim, dim}, bound, rng);
  p.key = uniform_parameter({dim, dim}, bound, rng);
  p.value = uniform_parameter({dim, dim}, bound, rng);
  p.output = uniform_parameter({dim, dim}, bound, rng);
  return p;
}

AttentionParams AttentionParams::identity(std::size_t dim, std::size_t heads) {
  AttentionParams p;
  p.mode = AttentionMode::projected;
  p.dim = dim;
  p.heads = heads;
  p.query = identity_matrix(dim);
  p.key = identity_matrix(dim);
  p.value = identity_matrix(dim);
  p.output = identity_matrix(dim);
  p.validate();
  return p;
}

void AttentionParams::validate() const {
  if (mode == AttentionMode::literal) {
    if (heads != 1) throw ConfigError("literal attention is single-head");
    return;
  }
  if (heads == 0 || dim % heads != 0) {
    throw ConfigError("model width " + std::to_string(dim) + " is not divisible by " +
                      std::to_string(heads) + " heads");
  }
  for (const Tensor* w : {&query, &key, &value, &output}) {
    if (!w->defined() || w->shape() != Shape{dim, dim}) {
      throw ShapeError("attention projections must be [" + std::to_string(dim) + "x" +
                       std::to_string(dim) + "]");
    }
  }
}

void AttentionParams::collect(const std::string& prefix, ParameterList& out) const {
  if (mode == AttentionMode::literal) return;
  out.push_back({prefix + ".query", query});
  out.push_back({prefix + ".key", key});
  out.push_back({prefix + ".value", value});
  out.push_back({prefix + ".output", output});
}

BlockParams BlockParams::init(std::size_t dim, std::size_t heads, std::size_t n_layers,
                              AttentionMode mode, Rng& rng) {
  BlockParams block;
  for (std::size_t l = 0; l < n_layers; ++l) {
    BlockLayer layer;
    layer.attention = mode == AttentionMode::literal ? AttentionParams::literal(dim)
                                                     : AttentionParams::init(dim, heads, rng);
    layer.ln_gamma = constant_parameter({dim}, 1.0);
    layer.ln_beta = constant_parameter({dim}, 0.0);
    block.layers.push_back(std::move(layer));
  }
  return block;
}

void BlockParams::collect(const std::string& prefix, ParameterList& out) const {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string p = prefix + "." + std::to_string(l);
    out.push_back({p + ".ln_gamma", layers[l].ln_gamma});
    out.push_back({p + ".ln_beta", layers[l].ln_beta});
    layers[l].attention.collect(p + ".attention", out);
  }
}

Tensor attention_weights(const Tensor& x, const AttentionParams& params) {
  return scores_softmax(project(as_batched(x), params));
}

Tensor self_attention(const Tensor& x, const AttentionParams& params, AttentionScope scope) {
  const Batched in = as_batched(x);
  const Projected p = project(in, params);
  Tensor weights = scores_softmax(p);
  Tensor mixed = matmul(weights, p.v);
  // Q K^T and A V each cost n * n * dh per head.
  record_madds(scope, 2ULL * in.batch * in.n * in.n * in.d);
  Tensor out = params.mode == AttentionMode::literal
                   ? mixed
                   : matmul(merge_heads(mixed, in.batch, in.n, params.heads, p.dh), params.output);
  return x.rank() == 2 ? reshape(out, x.shape()) : out;
}

Tensor transformer_block(const Tensor& x, const BlockParams& params, AttentionScope scope) {
  Tensor h = x;
  for (const auto& layer : params.layers) {
    h = add(self_attention(layer_norm(h, layer.ln_gamma, layer.ln_beta), layer.attention, scope),
            h);
  }
  return h;
}

}  // namespace seqview
