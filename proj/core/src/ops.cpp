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

#include "seqview/ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "seqview/error.hpp"

namespace seqview {

namespace {

using detail::Node;

// C[m,n] += A[m,k] * B[k,n]
void gemm_nn(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
             std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = a[i * k + p];
      const double* bp = b + p * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += av * bp[j];
    }
  }
}

// C[m,n] += A[m,k] * B[n,k]^T
void gemm_nt(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
             std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * k;
    for (std::size_t j = 0; j < n; ++j) {
      const double* bj = b + j * k;
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += ai[p] * bj[p];
      c[i * n + j] += s;
    }
  }
}

// C[m,n] += A[k,m]^T * B[k,n]
void gemm_tn(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
             std::size_t n) {
  for (std::size_t p = 0; p < k; ++p) {
    const double* bp = b + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double av = a[p * m + i];
      double* ci = c + i * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += av * bp[j];
    }
  }
}

struct AxisSplit {
  std::size_t outer = 1;
  std::size_t len = 1;
  std::size_t inner = 1;
};

AxisSplit split_axis(const Shape& shape, std::size_t axis, const char* op) {
  if (axis >= shape.size()) {
    throw ShapeError(std::string(op) + ": axis " + std::to_string(axis) +
                     " out of range for shape " + shape_string(shape));
  }
  AxisSplit s;
  for (std::size_t i = 0; i < axis; ++i) s.outer *= shape[i];
  s.len = shape[axis];
  for (std::size_t i = axis + 1; i < shape.size(); ++i) s.inner *= shape[i];
  return s;
}

Shape drop_axis(const Shape& shape, std::size_t axis) {
  Shape out;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i != axis) out.push_back(shape[i]);
  }
  if (out.empty()) out.push_back(1);
  return out;
}

bool is_suffix(const Shape& small, const Shape& big) {
  if (small.size() > big.size()) return false;
  return std::equal(small.begin(), small.end(), big.end() - static_cast<std::ptrdiff_t>(small.size()));
}

// Resolves trailing broadcast; returns the output shape.
Shape broadcast_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() == b.shape()) return a.shape();
  if (is_suffix(b.shape(), a.shape())) return a.shape();
  if (is_suffix(a.shape(), b.shape())) return b.shape();
  throw ShapeError(std::string(op) + ": cannot broadcast " + shape_string(a.shape()) + " with " +
                   shape_string(b.shape()));
}

// Adds g (laid out over the output) into the gradient of an operand that may
// have been broadcast.
void accumulate_broadcast(Node& operand, std::span<const double> g) {
  if (!operand.track) return;
  auto& dst = operand.grad_buffer();
  const std::size_t n = dst.size();
  if (n == g.size()) {
    for (std::size_t i = 0; i < n; ++i) dst[i] += g[i];
  } else {
    for (std::size_t i = 0; i < g.size(); ++i) dst[i % n] += g[i];
  }
}

template <typename Forward, typename Derivative>
Tensor unary(const Tensor& a, Forward f, Derivative df) {
  const auto x = a.values();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i]);
  return Tensor::from_op(a.shape(), std::move(out), {a}, [df](const Node& self) {
    auto& in = *self.parents[0];
    if (!in.track) return;
    auto& g = in.grad_buffer();
    for (std::size_t i = 0; i < g.size(); ++i) {
      g[i] += self.grad[i] * df(in.values[i], self.values[i]);
    }
  });
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() < 2 || b.rank() < 2) {
    throw ShapeError("matmul: operands need rank >= 2, got " + shape_string(a.shape()) + " and " +
                     shape_string(b.shape()));
  }
  const std::size_t k = a.shape().back();
  const std::size_t n = b.shape().back();
  if (b.shape()[b.rank() - 2] != k) {
    throw ShapeError("matmul: inner dimensions differ for " + shape_string(a.shape()) + " and " +
                     shape_string(b.shape()));
  }
  Shape out_shape = a.shape();
  out_shape.back() = n;

  if (b.rank() == 2) {
    const std::size_t rows = a.numel() / k;
    std::vector<double> out(rows * n, 0.0);
    gemm_nn(a.values().data(), b.values().data(), out.data(), rows, k, n);
    return Tensor::from_op(std::move(out_shape), std::move(out), {a, b},
                           [rows, k, n](const Node& self) {
                             auto& na = *self.parents[0];
                             auto& nb = *self.parents[1];
                             if (na.track) {
                               gemm_nt(self.grad.data(), nb.values.data(), na.grad_buffer().data(),
                                       rows, n, k);
                             }
                             if (nb.track) {
                               gemm_tn(na.values.data(), self.grad.data(), nb.grad_buffer().data(),
                                       k, rows, n);
                             }
                           });
  }

  if (a.rank() != b.rank() ||
      !std::equal(a.shape().begin(), a.shape().end() - 2, b.shape().begin())) {
    throw ShapeError("matmul: batch dimensions differ for " + shape_string(a.shape()) + " and " +
                     shape_string(b.shape()));
  }
  const std::size_t m = a.shape()[a.rank() - 2];
  const std::size_t batch = a.numel() / (m * k);
  std::vector<double> out(batch * m * n, 0.0);
  for (std::size_t s = 0; s < batch; ++s) {
    gemm_nn(a.values().data() + s * m * k, b.values().data() + s * k * n, out.data() + s * m * n,
            m, k, n);
  }
  return Tensor::from_op(std::move(out_shape), std::move(out), {a, b},
                         [batch, m, k, n](const Node& self) {
                           auto& na = *self.parents[0];
                           auto& nb = *self.parents[1];
                           for (std::size_t s = 0; s < batch; ++s) {
                             const double* g = self.grad.data() + s * m * n;
                             if (na.track) {
                               gemm_nt(g, nb.values.data() + s * k * n,
                                       na.grad_buffer().data() + s * m * k, m, n, k);
                             }
                             if (nb.track) {
                               gemm_tn(na.values.data() + s * m * k, g,
                                       nb.grad_buffer().data() + s * k * n, k, m, n);
                             }
                           }
                         });
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
  if (a.rank() < 2 || a.rank() != b.rank() ||
      !std::equal(a.shape().begin(), a.shape().end() - 2, b.shape().begin()) ||
      a.shape().back() != b.shape().back()) {
    throw ShapeError("matmul_nt: incompatible shapes " + shape_string(a.shape()) + " and " +
                     shape_string(b.shape()));
  }
  const std::size_t k = a.shape().back();
  const std::size_t m = a.shape()[a.rank() - 2];
  const std::size_t n = b.shape()[b.rank() - 2];
  const std::size_t batch = a.numel() / (m * k);
  Shape out_shape = a.shape();
  out_shape.back() = n;
  std::vector<double> out(batch * m * n, 0.0);
  for (std::size_t s = 0; s < batch; ++s) {
    gemm_nt(a.values().data() + s * m * k, b.values().data() + s * n * k, out.data() + s * m * n,
            m, k, n);
  }
  return Tensor::from_op(std::move(out_shape), std::move(out), {a, b},
                         [batch, m, k, n](const Node& self) {
                           auto& na = *self.parents[0];
                           auto& nb = *self.parents[1];
                           for (std::size_t s = 0; s < batch; ++s) {
                             const double* g = self.grad.data() + s * m * n;
                             if (na.track) {
                               gemm_nn(g, nb.values.data() + s * n * k,
                                       na.grad_buffer().data() + s * m * k, m, n, k);
                             }
                             if (nb.track) {
                               gemm_tn(g, na.values.data() + s * m * k,
                                       nb.grad_buffer().data() + s * n * k, n, m, k);
                             }
                           }
                         });
}

Tensor add(const Tensor& a, const Tensor& b) {
  Shape shape = broadcast_shape(a, b, "add");
  const std::size_t total = element_count(shape);
  const auto x = a.values();
  const auto y = b.values();
  std::vector<double> out(total);
  for (std::size_t i = 0; i < total; ++i) out[i] = x[i % x.size()] + y[i % y.size()];
  return Tensor::from_op(std::move(shape), std::move(out), {a, b}, [](const Node& self) {
    accumulate_broadcast(*self.parents[0], self.grad);
    accumulate_broadcast(*self.parents[1], self.grad);
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  Shape shape = broadcast_shape(a, b, "sub");
  const std::size_t total = element_count(shape);
  const auto x = a.values();
  const auto y = b.values();
  std::vector<double> out(total);
  for (std::size_t i = 0; i < total; ++i) out[i] = x[i % x.size()] - y[i % y.size()];
  return Tensor::from_op(std::move(shape), std::move(out), {a, b}, [](const Node& self) {
    accumulate_broadcast(*self.parents[0], self.grad);
    if (self.parents[1]->track) {
      std::vector<double> neg(self.grad.size());
      for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -self.grad[i];
      accumulate_broadcast(*self.parents[1], neg);
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  Shape shape = broadcast_shape(a, b, "mul");
  const std::size_t total = element_count(shape);
  const auto x = a.values();
  const auto y = b.values();
  std::vector<double> out(total);
  for (std::size_t i = 0; i < total; ++i) out[i] = x[i % x.size()] * y[i % y.size()];
  return Tensor::from_op(std::move(shape), std::move(out), {a, b}, [](const Node& self) {
    const auto& na = *self.parents[0];
    const auto& nb = *self.parents[1];
    const std::size_t total = self.grad.size();
    if (na.track) {
      std::vector<double> g(total);
      for (std::size_t i = 0; i < total; ++i) g[i] = self.grad[i] * nb.values[i % nb.values.size()];
      accumulate_broadcast(*self.parents[0], g);
    }
    if (nb.track) {
      std::vector<double> g(total);
      for (std::size_t i = 0; i < total; ++i) g[i] = self.grad[i] * na.values[i % na.values.size()];
      accumulate_broadcast(*self.parents[1], g);
    }
  });
}

Tensor scale(const Tensor& a, double factor) {
  return unary(
      a, [factor](double x) { return x * factor; },
      [factor](double, double) { return factor; });
}

Tensor add_scalar(const Tensor& a, double offset) {
  return unary(
      a, [offset](double x) { return x + offset; }, [](double, double) { return 1.0; });
}

Tensor negate(const Tensor& a) {
  return unary(
      a, [](double x) { return -x; }, [](double, double) { return -1.0; });
}

Tensor exp(const Tensor& a) {
  return unary(
      a, [](double x) { return std::exp(std::clamp(x, -kExpClamp, kExpClamp)); },
      [](double x, double y) { return (x >= -kExpClamp && x <= kExpClamp) ? y : 0.0; });
}

Tensor sigmoid(const Tensor& a) {
  return unary(
      a,
      [](double x) {
        if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor relu(const Tensor& a) {
  return unary(
      a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor clamp(const Tensor& a, double lo, double hi) {
  if (!(lo <= hi)) throw DomainError("clamp: lower bound exceeds upper bound");
  return unary(
      a, [lo, hi](double x) { return std::clamp(x, lo, hi); },
      [lo, hi](double x, double) { return (x >= lo && x <= hi) ? 1.0 : 0.0; });
}

Tensor cumsum(const Tensor& a, std::size_t axis, bool exclusive) {
  const AxisSplit s = split_axis(a.shape(), axis, "cumsum");
  const auto x = a.values();
  std::vector<double> out(x.size());
  for (std::size_t o = 0; o < s.outer; ++o) {
    for (std::size_t in = 0; in < s.inner; ++in) {
      double run = 0.0;
      for (std::size_t l = 0; l < s.len; ++l) {
        const std::size_t idx = (o * s.len + l) * s.inner + in;
        if (exclusive) {
          out[idx] = run;
          run += x[idx];
        } else {
          run += x[idx];
          out[idx] = run;
        }
      }
    }
  }
  return Tensor::from_op(a.shape(), std::move(out), {a}, [s, exclusive](const Node& self) {
    auto& in_node = *self.parents[0];
    if (!in_node.track) return;
    auto& g = in_node.grad_buffer();
    // Adjoint of a running sum is a reverse running sum.
    for (std::size_t o = 0; o < s.outer; ++o) {
      for (std::size_t in = 0; in < s.inner; ++in) {
        double run = 0.0;
        for (std::size_t l = s.len; l-- > 0;) {
          const std::size_t idx = (o * s.len + l) * s.inner + in;
          if (exclusive) {
            g[idx] += run;
            run += self.grad[idx];
          } else {
            run += self.grad[idx];
            g[idx] += run;
          }
        }
      }
    }
  });
}

Tensor sum(const Tensor& a, std::size_t axis) {
  const AxisSplit s = split_axis(a.shape(), axis, "sum");
  const auto x = a.values();
  std::vector<double> out(s.outer * s.inner, 0.0);
  for (std::size_t o = 0; o < s.outer; ++o) {
    for (std::size_t l = 0; l < s.len; ++l) {
      for (std::size_t in = 0; in < s.inner; ++in) {
        out[o * s.inner + in] += x[(o * s.len + l) * s.inner + in];
      }
    }
  }
  return Tensor::from_op(drop_axis(a.shape(), axis), std::move(out), {a}, [s](const Node& self) {
    auto& in_node = *self.parents[0];
    if (!in_node.track) return;
    auto& g = in_node.grad_buffer();
    for (std::size_t o = 0; o < s.outer; ++o) {
      for (std::size_t l = 0; l < s.len; ++l) {
        for (std::size_t in = 0; in < s.inner; ++in) {
          g[(o * s.len + l) * s.inner + in] += self.grad[o * s.inner + in];
        }
      }
    }
  });
}

Tensor mean(const Tensor& a, std::size_t axis) {
  const AxisSplit s = split_axis(a.shape(), axis, "mean");
  return scale(sum(a, axis), 1.0 / static_cast<double>(s.len));
}

Tensor sum_all(const Tensor& a) {
  const auto x = a.values();
  double total = 0.0;
  for (double v : x) total += v;
  return Tensor::from_op({1}, {total}, {a}, [](const Node& self) {
    auto& in_node = *self.parents[0];
    if (!in_node.track) return;
    auto& g = in_node.grad_buffer();
    for (auto& v : g) v += self.grad[0];
  });
}

Tensor softmax(const Tensor& a, std::size_t axis) {
  const AxisSplit s = split_axis(a.shape(), axis, "softmax");
  const auto x = a.values();
  std::vector<double> out(x.size());
  for (std::size_t o = 0; o < s.outer; ++o) {
    for (std::size_t in = 0; in < s.inner; ++in) {
      const std::size_t base = o * s.len * s.inner + in;
      double peak = x[base];
      for (std::size_t l = 1; l < s.len; ++l) peak = std::max(peak, x[base + l * s.inner]);
      double total = 0.0;
      for (std::size_t l = 0; l < s.len; ++l) {
        const double e = std::exp(x[base + l * s.inner] - peak);
        out[base + l * s.inner] = e;
        total += e;
      }
      for (std::size_t l = 0; l < s.len; ++l) out[base + l * s.inner] /= total;
    }
  }
  return Tensor::from_op(a.shape(), std::move(out), {a}, [s](const Node& self) {
    auto& in_node = *self.parents[0];
    if (!in_node.track) return;
    auto& g = in_node.grad_buffer();
    const auto& y = self.values;
    for (std::size_t o = 0; o < s.outer; ++o) {
      for (std::size_t in = 0; in < s.inner; ++in) {
        const std::size_t base = o * s.len * s.inner + in;
        double dot = 0.0;
        for (std::size_t l = 0; l < s.len; ++l) {
          dot += self.grad[base + l * s.inner] * y[base + l * s.inner];
        }
        for (std::size_t l = 0; l < s.len; ++l) {
          const std::size_t idx = base + l * s.inner;
          g[idx] += y[idx] * (self.grad[idx] - dot);
        }
      }
    }
  });
}

Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps) {
  if (!(eps > 0.0)) throw DomainError("layer_norm: eps must be positive");
  const std::size_t d = x.shape().back();
  if (gamma.numel() != d || beta.numel() != d || gamma.rank() != 1 || beta.rank() != 1) {
    throw ShapeError("layer_norm: gamma " + shape_string(gamma.shape()) + " and beta " +
                     shape_string(beta.shape()) + " must be [" + std::to_string(d) +
                     "] for input " + shape_string(x.shape()));
  }
  const std::size_t rows = x.numel() / d;
  const auto xv = x.values();
  const auto gv = gamma.values();
  const auto bv = beta.values();
  std::vector<double> out(xv.size());
  std::vector<double> normalized(xv.size());
  std::vector<double> inv_std(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = xv.data() + r * d;
    double mu = 0.0;
    for (std::size_t j = 0; j < d; ++j) mu += row[j];
    mu /= static_cast<double>(d);
    double var = 0.0;
    for (std::size_t j = 0; j < d; ++j) var += (row[j] - mu) * (row[j] - mu);
    var /= static_cast<double>(d);
    inv_std[r] = 1.0 / std::sqrt(var + eps);
    for (std::size_t j = 0; j < d; ++j) {
      const double xh = (row[j] - mu) * inv_std[r];
      normalized[r * d + j] = xh;
      out[r * d + j] = xh * gv[j] + bv[j];
    }
  }
  return Tensor::from_op(
      x.shape(), std::move(out), {x, gamma, beta},
      [rows, d, normalized = std::move(normalized), inv_std = std::move(inv_std)](const Node& self) {
        auto& nx = *self.parents[0];
        auto& ng = *self.parents[1];
        auto& nb = *self.parents[2];
        if (ng.track || nb.track) {
          for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t j = 0; j < d; ++j) {
              const double gy = self.grad[r * d + j];
              if (ng.track) ng.grad_buffer()[j] += gy * normalized[r * d + j];
              if (nb.track) nb.grad_buffer()[j] += gy;
            }
          }
        }
        if (!nx.track) return;
        auto& gx = nx.grad_buffer();
        const double inv_d = 1.0 / static_cast<double>(d);
        for (std::size_t r = 0; r < rows; ++r) {
          double mean_g = 0.0;
          double mean_gx = 0.0;
          for (std::size_t j = 0; j < d; ++j) {
            const double gxh = self.grad[r * d + j] * ng.values[j];
            mean_g += gxh;
            mean_gx += gxh * normalized[r * d + j];
          }
          mean_g *= inv_d;
          mean_gx *= inv_d;
          for (std::size_t j = 0; j < d; ++j) {
            const double gxh = self.grad[r * d + j] * ng.values[j];
            gx[r * d + j] += inv_std[r] * (gxh - mean_g - normalized[r * d + j] * mean_gx);
          }
        }
      });
}

Tensor reshape(const Tensor& a, Shape shape) {
  if (element_count(shape) != a.numel()) {
    throw ShapeError("reshape: cannot view " + shape_string(a.shape()) + " as " +
                     shape_string(shape));
  }
  std::vector<double> out(a.values().begin(), a.values().end());
  return Tensor::from_op(std::move(shape), std::move(out), {a}, [](const Node& self) {
    auto& in_node = *self.parents[0];
    if (!in_node.track) return;
    auto& g = in_node.grad_buffer();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
  });
}

Tensor permute(const Tensor& a, const std::vector<std::size_t>& axes) {
  const std::size_t rank = a.rank();
  std::vector<bool> used(rank, false);
  if (axes.size() != rank) {
    throw ShapeError("permute: " + std::to_string(axes.size()) + " axes for shape " +
                     shape_string(a.shape()));
  }
  for (auto ax : axes) {
    if (ax >= rank || used[ax]) {
      throw ShapeError("permute: invalid axis list for shape " + shape_string(a.shape()));
    }
    used[ax] = true;
  }
  Shape out_shape(rank);
  for (std::size_t i = 0; i < rank; ++i) out_shape[i] = a.shape()[axes[i]];
  std::vector<std::size_t> in_strides(rank, 1);
  for (std::size_t i = rank; i-- > 1;) in_strides[i - 1] = in_strides[i] * a.shape()[i];

  // source[i] = flat input index feeding flat output index i
  std::vector<std::size_t> source(a.numel());
  std::vector<std::size_t> counter(rank, 0);
  for (std::size_t i = 0; i < source.size(); ++i) {
    std::size_t src = 0;
    for (std::size_t r = 0; r < rank; ++r) src += counter[r] * in_strides[axes[r]];
    source[i] = src;
    for (std::size_t r = rank; r-- > 0;) {
      if (++counter[r] < out_shape[r]) break;
      counter[r] = 0;
    }
  }
  const auto x = a.values();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[source[i]];
  return Tensor::from_op(std::move(out_shape), std::move(out), {a},
                         [source = std::move(source)](const Node& self) {
                           auto& in_node = *self.parents[0];
                           if (!in_node.track) return;
                           auto& g = in_node.grad_buffer();
                           for (std::size_t i = 0; i < source.size(); ++i) {
                             g[source[i]] += self.grad[i];
                           }
                         });
}

Tensor repeat_last(const Tensor& a, std::size_t n) {
  if (n == 0) throw ShapeError("repeat_last: count must be positive");
  Shape shape = a.shape();
  shape.push_back(n);
  const auto x = a.values();
  std::vector<double> out(x.size() * n);
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(i * n), n, x[i]);
  }
  return Tensor::from_op(std::move(shape), std::move(out), {a}, [n](const Node& self) {
    auto& in_node = *self.parents[0];
    if (!in_node.track) return;
    auto& g = in_node.grad_buffer();
    for (std::size_t i = 0; i < g.size(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += self.grad[i * n + j];
      g[i] += s;
    }
  });
}

}  // namespace seqview
