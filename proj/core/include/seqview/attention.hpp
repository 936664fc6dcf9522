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
#include <vector>

#include "seqview/layers.hpp"

namespace seqview {

enum class AttentionMode {
  literal,    // softmax(X X^T / sqrt(d)) X, no weights
  projected,  // multi-head with learned Q/K/V and output projections
};

/// Which attention stage a call belongs to, for multiply-add accounting.
enum class AttentionScope { global, ray, pixel, other };

/// Multiply-adds spent in attention score (Q K^T) and value (A V) products,
/// per stage, on the current thread.
struct MaddCounters {
  std::uint64_t global = 0;
  std::uint64_t ray = 0;
  std::uint64_t pixel = 0;
  std::uint64_t other = 0;
};

MaddCounters& madd_counters();
void reset_madd_counters();

struct AttentionParams {
  AttentionMode mode = AttentionMode::projected;
  std::size_t dim = 0;
  std::size_t heads = 1;
  Tensor query;   // [d, d]; projected mode only
  Tensor key;
  Tensor value;
  Tensor output;

  static AttentionParams literal(std::size_t dim);
  /// Projections uniform in [-1/sqrt(d), 1/sqrt(d)]. Throws ConfigError when
  /// heads does not divide dim.
  static AttentionParams init(std::size_t dim, std::size_t heads, Rng& rng);
  /// Identity Q/K/V/output projections.
  static AttentionParams identity(std::size_t dim, std::size_t heads);

  void validate() const;
  void collect(const std::string& prefix, ParameterList& out) const;
};

struct BlockLayer {
  AttentionParams attention;
  Tensor ln_gamma;
  Tensor ln_beta;
};

/// A stack of residual pre-norm attention layers:
/// X <- SelfAttention(LayerNorm(X)) + X, once per layer.
struct BlockParams {
  std::vector<BlockLayer> layers;

  static BlockParams init(std::size_t dim, std::size_t heads, std::size_t n_layers,
                          AttentionMode mode, Rng& rng);

  bool empty() const { return layers.empty(); }
  void collect(const std::string& prefix, ParameterList& out) const;
};

/// Softmax attention weights, [batch * heads, n, n] for input [n, d] or
/// [batch, n, d].
Tensor attention_weights(const Tensor& x, const AttentionParams& params);

/// Self-attention over the token axis. x is [n, d] or [batch, n, d]; each
/// batch entry attends only within itself.
Tensor self_attention(const Tensor& x, const AttentionParams& params,
                      AttentionScope scope = AttentionScope::other);

Tensor transformer_block(const Tensor& x, const BlockParams& params,
                         AttentionScope scope = AttentionScope::other);

}  // namespace seqview
