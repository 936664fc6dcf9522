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

#include <functional>
#include <string>
#include <vector>

#include "seqview/tensor.hpp"

namespace seqview {

struct GradCheckResult {
  std::string name;
  std::string worst_leaf;
  double rel_error = 0.0;
  bool passed = false;
};

/// Compares autograd against central differences of `loss_fn` for each leaf.
/// Returns, per leaf, ||analytic - numeric|| / max(||analytic||, ||numeric||)
/// (the denominator floored at 1e-7). `loss_fn` must rebuild the graph from
/// the leaves on every call.
std::vector<double> gradient_errors(const std::function<Tensor()>& loss_fn,
                                    std::vector<Tensor> leaves, double step = 1e-6);

/// The standard suite: every differentiable operation plus a full forward
/// pass of each model variant at N_p=2, N_r=3, d=4, H=2.
std::vector<GradCheckResult> run_gradient_suite(double tolerance = 1e-4);

}  // namespace seqview
