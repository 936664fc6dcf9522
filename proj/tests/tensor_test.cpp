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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "seqview/error.hpp"
#include "seqview/gradcheck.hpp"
#include "seqview/ops.hpp"
#include "test_util.hpp"

namespace seqview {
namespace {

using testing::bitwise_equal;
using testing::max_abs_diff;
using testing::random_tensor;

std::vector<double> naive_matmul(const Tensor& a, const Tensor& b) {
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  std::vector<double> c(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t p = 0; p < k; ++p) c[i * n + j] += a.value(i * k + p) * b.value(p * n + j);
  return c;
}

TEST(Matmul, HandExample) {
  Tensor a({2, 2}, {1, 2, 3, 4});
  Tensor b({2, 2}, {5, 6, 7, 8});
  Tensor c = matmul(a, b);
  EXPECT_EQ(c.shape(), (Shape{2, 2}));
  EXPECT_EQ(std::vector<double>(c.values().begin(), c.values().end()),
            (std::vector<double>{19, 22, 43, 50}));
}

TEST(Matmul, IdentityAndZero) {
  Rng rng(3);
  Tensor a = random_tensor({4, 5}, rng);
  std::vector<double> eye(25, 0.0);
  for (int i = 0; i < 5; ++i) eye[i * 6] = 1.0;
  EXPECT_TRUE(bitwise_equal(matmul(a, Tensor({5, 5}, eye)).values(), a.values()));
  Tensor zero = matmul(a, Tensor({5, 3}));
  for (double v : zero.values()) EXPECT_EQ(v, 0.0);
}

TEST(Matmul, MatchesTripleLoopOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 1 + rng.index(16), k = 1 + rng.index(16), n = 1 + rng.index(16);
    Tensor a = random_tensor({m, k}, rng);
    Tensor b = random_tensor({k, n}, rng);
    EXPECT_LE(max_abs_diff(matmul(a, b).values(), naive_matmul(a, b)), 1e-12);
  }
}

TEST(Matmul, BatchedAndTransposedAgree) {
  Rng rng(5);
  Tensor a = random_tensor({3, 4, 5}, rng);
  Tensor b = random_tensor({3, 6, 5}, rng);
  Tensor nt = matmul_nt(a, b);
  Tensor bt = permute(b, {0, 2, 1});
  Tensor ref = matmul(a, bt);
  EXPECT_EQ(nt.shape(), (Shape{3, 4, 6}));
  EXPECT_LE(max_abs_diff(nt.values(), ref.values()), 1e-12);
}

TEST(Matmul, ShapeMismatchThrows) {
  EXPECT_THROW(matmul(Tensor({2, 3}), Tensor({2, 3})), ShapeError);
  EXPECT_THROW(Tensor({2, 0}), ShapeError);
  EXPECT_THROW(Tensor({2, 2}, {1.0, 2.0}), ShapeError);
}

TEST(Softmax, HandExamples) {
  Tensor s = softmax(Tensor({2}, {0.0, 0.0}), 0);
  EXPECT_DOUBLE_EQ(s.value(0), 0.5);
  EXPECT_DOUBLE_EQ(s.value(1), 0.5);

  s = softmax(Tensor({2}, {0.0, std::log(3.0)}), 0);
  EXPECT_NEAR(s.value(0), 0.25, 1e-15);
  EXPECT_NEAR(s.value(1), 0.75, 1e-15);

  for (double x : {-700.0, 0.0, 3.5, 1e6}) {
    EXPECT_EQ(softmax(Tensor({1}, std::vector<double>{x}), 0).value(0), 1.0);
  }
}

TEST(Softmax, SlicesSumToOne) {
  Rng rng(8);
  Tensor x = random_tensor({5, 7, 9}, rng, -30.0, 30.0);
  for (std::size_t axis = 0; axis < 3; ++axis) {
    Tensor s = softmax(x, axis);
    Tensor total = sum(s, axis);
    for (double v : total.values()) EXPECT_NEAR(v, 1.0, 1e-12);
  }
}

TEST(LayerNorm, HandExamples) {
  Tensor ones({2}, {1.0, 1.0});
  Tensor zeros({2}, {0.0, 0.0});
  Tensor y = layer_norm(Tensor({3, 2}, {4, 4, -1, -1, 0, 0}), ones, zeros);
  for (double v : y.values()) EXPECT_EQ(v, 0.0);

  y = layer_norm(Tensor({2}, {1.0, 3.0}), ones, zeros, 1e-14);
  EXPECT_NEAR(y.value(0), -1.0, 1e-12);
  EXPECT_NEAR(y.value(1), 1.0, 1e-12);

  Tensor beta({2}, {0.25, -2.0});
  y = layer_norm(Tensor({2, 2}, {1, 9, -3, 2}), Tensor({2}), beta);
  EXPECT_TRUE(bitwise_equal(y.values(), std::vector<double>{0.25, -2.0, 0.25, -2.0}));
}

TEST(LayerNorm, StandardizesRows) {
  Rng rng(21);
  const std::size_t d = 16;
  Tensor gamma({d}, std::vector<double>(d, 1.0));
  Tensor beta({d});
  for (int trial = 0; trial < 50; ++trial) {
    const double spread = 2.0 + 50.0 * rng.uniform();
    Tensor x = random_tensor({4, d}, rng, -spread, spread);
    Tensor y = layer_norm(x, gamma, beta);
    for (std::size_t r = 0; r < 4; ++r) {
      double in_mean = 0.0, in_var = 0.0, m = 0.0, v = 0.0;
      for (std::size_t c = 0; c < d; ++c) in_mean += x.value(r * d + c) / d;
      for (std::size_t c = 0; c < d; ++c) {
        const double dx = x.value(r * d + c) - in_mean;
        in_var += dx * dx / d;
      }
      if (in_var < 1.0) continue;
      for (std::size_t c = 0; c < d; ++c) m += y.value(r * d + c) / d;
      for (std::size_t c = 0; c < d; ++c) v += (y.value(r * d + c) - m) * (y.value(r * d + c) - m) / d;
      EXPECT_LT(std::abs(m), 1e-10);
      EXPECT_NEAR(v, 1.0, 1e-6);
    }
  }
}

TEST(Elementwise, Examples) {
  Tensor ones = exp(Tensor({3}));
  for (double v : ones.values()) EXPECT_EQ(v, 1.0);

  Tensor cs = cumsum(Tensor({3}, {1, 2, 3}), 0, true);
  EXPECT_TRUE(bitwise_equal(cs.values(), std::vector<double>{0, 1, 3}));
  cs = cumsum(Tensor({3}, {1, 2, 3}), 0, false);
  EXPECT_TRUE(bitwise_equal(cs.values(), std::vector<double>{1, 3, 6}));

  Tensor rows({4, 3}, {1.5, -2, 7, 1.5, -2, 7, 1.5, -2, 7, 1.5, -2, 7});
  EXPECT_TRUE(bitwise_equal(mean(rows, 0).values(), std::vector<double>{1.5, -2, 7}));
}

TEST(Elementwise, ExpClampsHugeInputs) {
  Tensor y = exp(Tensor({2}, {1000.0, -1000.0}));
  EXPECT_EQ(y.value(0), std::exp(kExpClamp));
  EXPECT_EQ(y.value(1), std::exp(-kExpClamp));
}

TEST(Elementwise, TrailingBroadcast) {
  Tensor a({2, 3}, {1, 2, 3, 4, 5, 6});
  Tensor b({3}, {10, 20, 30});
  EXPECT_TRUE(bitwise_equal(add(a, b).values(), std::vector<double>{11, 22, 33, 14, 25, 36}));
  EXPECT_THROW(add(a, Tensor({2})), ShapeError);
}

TEST(Autograd, PowerRule) {
  Tensor x = Tensor::scalar(3.0, true);
  backward(mul(x, x));
  ASSERT_TRUE(x.has_grad());
  EXPECT_EQ(x.grad()[0], 6.0);
}

TEST(Autograd, SoftmaxSumHasZeroGradient) {
  Rng rng(2);
  Tensor x = random_tensor({6}, rng, -1.0, 1.0, true);
  backward(sum_all(softmax(x, 0)));
  for (double g : x.grad()) EXPECT_NEAR(g, 0.0, 1e-15);
}

TEST(Autograd, GradientsAccumulateOnLeaves) {
  Tensor x = Tensor::scalar(2.0, true);
  backward(scale(x, 3.0));
  backward(scale(x, 3.0));
  EXPECT_EQ(x.grad()[0], 6.0);
  x.zero_grad();
  EXPECT_FALSE(x.has_grad());
}

TEST(Autograd, SharedSubexpressionSumsBothPaths) {
  Tensor x = Tensor::scalar(1.5, true);
  Tensor y = exp(x);
  backward(add(mul(y, y), y));  // d/dx (e^2x + e^x)
  EXPECT_NEAR(x.grad()[0], 2.0 * std::exp(3.0) + std::exp(1.5), 1e-12);
}

TEST(Autograd, NonScalarBackwardThrows) {
  Tensor x({2}, {1.0, 2.0}, true);
  EXPECT_THROW(backward(scale(x, 2.0)), ContractError);
}

TEST(Autograd, NoGradGuardStopsRecording) {
  Tensor x = Tensor::scalar(1.0, true);
  {
    NoGradGuard guard;
    EXPECT_FALSE(grad_enabled());
    EXPECT_FALSE(exp(x).tracks());
  }
  EXPECT_TRUE(grad_enabled());
  EXPECT_TRUE(exp(x).tracks());
}

TEST(Autograd, DetachCutsTheGraph) {
  Tensor x = Tensor::scalar(2.0, true);
  Tensor y = mul(x.detach(), x);
  backward(y);
  EXPECT_EQ(x.grad()[0], 2.0);
}

TEST(Autograd, BackwardIsBitwiseDeterministic) {
  auto run = [] {
    Rng rng(99);
    Tensor a = random_tensor({5, 4}, rng, -1.0, 1.0, true);
    Tensor b = random_tensor({4, 6}, rng, -1.0, 1.0, true);
    Tensor g = random_tensor({6}, rng, 0.5, 1.5, true);
    Tensor h = layer_norm(softmax(matmul(a, b), 1), g, Tensor({6}));
    backward(sum_all(mul(h, sigmoid(h))));
    std::vector<double> out(a.grad().begin(), a.grad().end());
    out.insert(out.end(), b.grad().begin(), b.grad().end());
    out.insert(out.end(), g.grad().begin(), g.grad().end());
    return out;
  };
  EXPECT_TRUE(bitwise_equal(run(), run()));
}

TEST(GradientSuite, EveryEntryPasses) {
  for (const auto& r : run_gradient_suite(1e-4)) {
    EXPECT_TRUE(r.passed) << r.name << " worst leaf " << r.worst_leaf << " rel " << r.rel_error;
    EXPECT_LT(r.rel_error, 1e-4) << r.name;
  }
}

TEST(GradientSuite, DetectsAWrongGradient) {
  Tensor x({3}, {0.3, -0.2, 0.9}, true);
  auto broken = [&] {
    std::vector<double> v(x.values().begin(), x.values().end());
    for (auto& e : v) e = e * e;
    return sum_all(Tensor::from_op({3}, v, {x}, [x](const detail::Node& self) mutable {
      auto g = x.mutable_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * 3.0 * x.value(i);
    }));
  };
  const auto errors = gradient_errors(broken, {x});
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_GT(errors[0], 0.1);
}

}  // namespace
}  // namespace seqview
