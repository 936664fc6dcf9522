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
#include <string>
#include <utility>
#include <vector>

#include "seqview/random.hpp"
#include "seqview/tensor.hpp"

namespace seqview {

struct NamedParameter {
  std::string name;
  Tensor tensor;
};

using ParameterList = std::vector<NamedParameter>;

/// Tracked leaf filled uniformly in [-bound, bound].
Tensor uniform_parameter(Shape shape, double bound, Rng& rng);
Tensor constant_parameter(Shape shape, double value);

/// y = x W + b over the last dimension of x. W is [in, out].
struct Linear {
  Tensor weight;
  Tensor bias;  // may be undefined

  static Linear init(std::size_t in, std::size_t out, Rng& rng, bool with_bias = true);

  std::size_t in_features() const { return weight.dim(0); }
  std::size_t out_features() const { return weight.dim(1); }

  Tensor operator()(const Tensor& x) const;
  void collect(const std::string& prefix, ParameterList& out) const;
};

}  // namespace seqview
