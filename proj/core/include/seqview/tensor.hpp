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
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace seqview {

using Shape = std::vector<std::size_t>;

std::size_t element_count(const Shape& shape);
std::string shape_string(const Shape& shape);

namespace detail {

// One recorded value in the define-by-run graph. Parents hold every input
// of the producing operation (tracked or not) so the adjoint can read their
// values; only tracked parents receive gradient.
struct Node {
  Shape shape;
  std::vector<double> values;
  std::vector<double> grad;
  bool track = false;
  std::uint64_t seq = 0;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(const Node&)> backward_fn;

  std::vector<double>& grad_buffer() {
    if (grad.empty()) grad.assign(values.size(), 0.0);
    return grad;
  }
};

}  // namespace detail

/// Dense row-major array of doubles with optional gradient tracking.
///
/// A Tensor is a shared handle: copies alias the same storage. Results of
/// operations on tracked inputs remember how they were produced, and
/// backward() replays the adjoints in reverse execution order.
class Tensor {
 public:
  using BackwardFn = std::function<void(const detail::Node&)>;

  Tensor() = default;
  explicit Tensor(Shape shape, bool track = false);
  Tensor(Shape shape, std::vector<double> values, bool track = false);

  static Tensor scalar(double value, bool track = false);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  std::size_t rank() const { return node_->shape.size(); }
  std::size_t dim(std::size_t axis) const { return node_->shape.at(axis); }
  std::size_t numel() const { return node_->values.size(); }

  std::span<const double> values() const { return node_->values; }
  // Writable storage; only meaningful for leaves (optimizer updates,
  // finite-difference probes). Never mutate a value a live graph depends on.
  std::span<double> mutable_values() { return node_->values; }
  double value(std::size_t flat_index) const { return node_->values.at(flat_index); }
  double item() const;

  bool tracks() const { return node_->track; }
  bool is_leaf() const { return !node_->backward_fn; }
  bool has_grad() const { return !node_->grad.empty(); }
  std::span<const double> grad() const { return node_->grad; }
  std::span<double> mutable_grad() { return node_->grad_buffer(); }
  void zero_grad() { node_->grad.clear(); }

  /// Value copy cut from any graph, tracking disabled.
  Tensor detach() const;

  /// Build the result of an operation. Tracking is inherited from the
  /// inputs unless gradient recording is disabled on this thread.
  static Tensor from_op(Shape shape, std::vector<double> values,
                        std::vector<Tensor> inputs, BackwardFn backward_fn);

  const std::shared_ptr<detail::Node>& node() const { return node_; }

 private:
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}

  std::shared_ptr<detail::Node> node_;
};

/// Accumulate d(loss)/d(leaf) into every tracked leaf reachable from loss.
/// Intermediate gradients are reset first; leaf gradients accumulate.
void backward(const Tensor& loss);

bool grad_enabled();

/// Disables graph recording on the current thread for its lifetime.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

}  // namespace seqview
