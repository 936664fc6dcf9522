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

#include "seqview/tensor.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <unordered_set>

#include "seqview/error.hpp"

namespace seqview {

namespace {

std::atomic<std::uint64_t> next_seq{1};
thread_local bool recording = true;

}  // namespace

std::size_t element_count(const Shape& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

Tensor::Tensor(Shape shape, bool track)
    : Tensor(shape, std::vector<double>(element_count(shape), 0.0), track) {}

Tensor::Tensor(Shape shape, std::vector<double> values, bool track) {
  for (auto d : shape) {
    if (d == 0) throw ShapeError("tensor dimensions must be positive, got " + shape_string(shape));
  }
  if (values.size() != element_count(shape)) {
    throw ShapeError("tensor of shape " + shape_string(shape) + " needs " +
                     std::to_string(element_count(shape)) + " values, got " +
                     std::to_string(values.size()));
  }
  node_ = std::make_shared<detail::Node>();
  node_->shape = std::move(shape);
  node_->values = std::move(values);
  node_->track = track;
  node_->seq = next_seq.fetch_add(1, std::memory_order_relaxed);
}

Tensor Tensor::scalar(double value, bool track) { return Tensor({1}, {value}, track); }

double Tensor::item() const {
  if (numel() != 1) {
    throw ContractError("item() needs a single-element tensor, got " + shape_string(shape()));
  }
  return node_->values[0];
}

Tensor Tensor::detach() const { return Tensor(node_->shape, node_->values, false); }

Tensor Tensor::from_op(Shape shape, std::vector<double> values, std::vector<Tensor> inputs,
                       BackwardFn backward_fn) {
  Tensor out(std::move(shape), std::move(values), false);
  if (!recording) return out;
  const bool any_tracked =
      std::any_of(inputs.begin(), inputs.end(), [](const Tensor& t) { return t.tracks(); });
  if (!any_tracked) return out;
  auto& node = *out.node_;
  node.track = true;
  node.parents.reserve(inputs.size());
  for (auto& t : inputs) node.parents.push_back(t.node_);
  node.backward_fn = std::move(backward_fn);
  return out;
}

void backward(const Tensor& loss) {
  if (!loss.defined() || loss.numel() != 1) {
    throw ContractError("backward needs a scalar loss, got " +
                        (loss.defined() ? shape_string(loss.shape()) : std::string("undefined")));
  }
  if (!loss.tracks()) return;

  std::vector<detail::Node*> order;
  std::unordered_set<const detail::Node*> seen;
  std::vector<detail::Node*> stack{loss.node().get()};
  seen.insert(stack.back());
  while (!stack.empty()) {
    auto* node = stack.back();
    stack.pop_back();
    order.push_back(node);
    for (auto& parent : node->parents) {
      if (parent->track && seen.insert(parent.get()).second) stack.push_back(parent.get());
    }
  }
  // Sequence numbers are assigned at creation, so descending order is the
  // exact reverse of execution order.
  std::sort(order.begin(), order.end(),
            [](const detail::Node* a, const detail::Node* b) { return a->seq > b->seq; });

  for (auto* node : order) {
    if (node->backward_fn) node->grad.clear();
  }
  loss.node()->grad_buffer()[0] += 1.0;
  for (auto* node : order) {
    if (node->backward_fn) {
      if (!node->grad.empty()) node->backward_fn(*node);
    } else {
      node->grad_buffer();
    }
  }
}

bool grad_enabled() { return recording; }

NoGradGuard::NoGradGuard() : previous_(recording) { recording = false; }

NoGradGuard::~NoGradGuard() { recording = previous_; }

}  // namespace seqview
