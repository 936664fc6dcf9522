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
#include <vector>

#include "seqview/tensor.hpp"

// Differentiable operations on Tensor. Every function records its adjoint
// when any input tracks gradients; all throw ShapeError on incompatible
// shapes.
//
// Broadcasting is trailing-only: in binary elementwise ops one operand's
// shape must equal the other's or be a suffix of it.

namespace seqview {

inline constexpr double kExpClamp = 60.0;

/// A[..., m, k] * B. If B is rank 2 ([k, n]) it is shared across A's leading
/// dimensions; otherwise B is [..., k, n] with the same leading dimensions.
Tensor matmul(const Tensor& a, const Tensor& b);

/// Batched A * B^T: A[..., m, k], B[..., n, k] -> [..., m, n].
Tensor matmul_nt(const Tensor& a, const Tensor& b);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
Tensor add_scalar(const Tensor& a, double offset);
Tensor negate(const Tensor& a);

/// exp(clamp(x, -60, 60)); zero gradient where the clamp is active.
Tensor exp(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor relu(const Tensor& a);
Tensor clamp(const Tensor& a, double lo, double hi);

/// Running sum along axis. The exclusive form shifts by one so element i
/// holds the sum of elements 0..i-1.
Tensor cumsum(const Tensor& a, std::size_t axis, bool exclusive);
Tensor sum(const Tensor& a, std::size_t axis);
Tensor mean(const Tensor& a, std::size_t axis);
Tensor sum_all(const Tensor& a);

Tensor softmax(const Tensor& a, std::size_t axis);

/// Normalizes over the last dimension, then applies gamma and beta.
Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps = 1e-8);

Tensor reshape(const Tensor& a, Shape shape);
Tensor permute(const Tensor& a, const std::vector<std::size_t>& axes);

/// Appends a trailing dimension of size n, copying each element n times.
Tensor repeat_last(const Tensor& a, std::size_t n);

inline Tensor operator+(const Tensor& a, const Tensor& b) { return add(a, b); }
inline Tensor operator-(const Tensor& a, const Tensor& b) { return sub(a, b); }
inline Tensor operator*(const Tensor& a, const Tensor& b) { return mul(a, b); }

}  // namespace seqview
