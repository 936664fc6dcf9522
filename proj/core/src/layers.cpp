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

#include "seqview/layers.hpp"

#include <cmath>

#include "seqview/ops.hpp"

namespace seqview {

Tensor uniform_parameter(Shape shape, double bound, Rng& rng) {
  std::vector<double> values(element_count(shape));
  for (auto& v : values) v = rng.uniform(-bound, bound);
  return Tensor(std::move(shape), std::move(values), true);
}

Tensor constant_parameter(Shape shape, double value) {
  std::vector<double> values(element_count(shape), value);
  return Tensor(std::move(shape), std::move(values), true);
}

Linear Linear::init(std::size_t in, std::size_t out, Rng& rng, bool with_bias) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  Linear layer;
  layer.weight = uniform_parameter({in, out}, bound, rng);
  if (with_bias) layer.bias = uniform_parameter({out}, bound, rng);
  return layer;
}

Tensor Linear::operator()(const Tensor& x) const {
  Tensor y = matmul(x, weight);
  return bias.defined() ? add(y, bias) : y;
}

void Linear::collect(const std::string& prefix, ParameterList& out) const {
  out.push_back({prefix + ".weight", weight});
  if (bias.defined()) out.push_back({prefix + ".bias", bias});
}

}  // namespace seqview
