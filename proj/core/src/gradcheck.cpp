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

#include "seqview/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "seqview/attention.hpp"
#include "seqview/embedding.hpp"
#include "seqview/layers.hpp"
#include "seqview/model.hpp"
#include "seqview/ops.hpp"
#include "seqview/random.hpp"
#include "seqview/training.hpp"

namespace seqview {

namespace {

Tensor random_leaf(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(element_count(shape));
  for (auto& x : v) x = rng.uniform(lo, hi);
  return Tensor(std::move(shape), std::move(v), true);
}

Tensor random_data(Shape shape, Rng& rng, double lo, double hi) {
  std::vector<double> v(element_count(shape));
  for (auto& x : v) x = rng.uniform(lo, hi);
  return Tensor(std::move(shape), std::move(v));
}

// Uniform in [-1, 1] but more than `gap` away from every kink.
Tensor leaf_away_from(Shape shape, Rng& rng, const std::vector<double>& kinks, double gap) {
  std::vector<double> v(element_count(shape));
  for (auto& x : v) {
    do {
      x = rng.uniform(-1.0, 1.0);
    } while (std::any_of(kinks.begin(), kinks.end(),
                         [&](double k) { return std::abs(x - k) <= gap; }));
  }
  return Tensor(std::move(shape), std::move(v), true);
}

// sum(out * w) for fixed random w.
Tensor probe(const Tensor& out, std::uint64_t seed) {
  Rng rng(seed);
  return sum_all(mul(out, random_data(out.shape(), rng, -1.0, 1.0)));
}

struct Case {
  std::string name;
  ParameterList leaves;
  std::function<Tensor()> loss;
};

RayPointBatch random_ray_points(std::size_t n_p, std::size_t n_r, Rng& rng) {
  RayPointBatch batch;
  batch.points = random_data({n_p, n_r, 6}, rng, -1.0, 1.0);
  batch.deltas = random_data({n_p, n_r}, rng, 0.1, 0.5);
  std::vector<double> t(n_p * n_r);
  for (std::size_t p = 0; p < n_p; ++p) {
    double acc = 2.0;
    for (std::size_t i = 0; i < n_r; ++i) {
      t[p * n_r + i] = acc;
      acc += batch.deltas.value(p * n_r + i);
    }
  }
  batch.t = Tensor({n_p, n_r}, std::move(t));
  return batch;
}

std::vector<Case> build_cases() {
  std::vector<Case> cases;
  Rng rng(20240601);

  {
    Tensor a = random_leaf({3, 4}, rng), b = random_leaf({4, 2}, rng);
    cases.push_back({"matmul", {{"a", a}, {"b", b}}, [=] { return probe(matmul(a, b), 1); }});
  }
  {
    Tensor a = random_leaf({2, 3, 4}, rng), b = random_leaf({2, 4, 5}, rng);
    cases.push_back(
        {"matmul_batched", {{"a", a}, {"b", b}}, [=] { return probe(matmul(a, b), 2); }});
  }
  {
    Tensor a = random_leaf({2, 3, 4}, rng), b = random_leaf({2, 5, 4}, rng);
    cases.push_back({"matmul_nt", {{"a", a}, {"b", b}}, [=] { return probe(matmul_nt(a, b), 3); }});
  }
  {
    Tensor a = random_leaf({2, 3, 4}, rng), b = random_leaf({4}, rng);
    cases.push_back({"add_broadcast", {{"a", a}, {"b", b}}, [=] { return probe(add(a, b), 4); }});
    cases.push_back({"sub_broadcast", {{"a", a}, {"b", b}}, [=] { return probe(sub(b, a), 5); }});
    cases.push_back({"mul_broadcast", {{"a", a}, {"b", b}}, [=] { return probe(mul(a, b), 6); }});
  }
  {
    Tensor a = random_leaf({3, 4}, rng);
    cases.push_back({"scale_add_scalar_negate", {{"a", a}},
                     [=] { return probe(negate(add_scalar(scale(a, 1.7), 0.3)), 7); }});
    cases.push_back({"exp", {{"a", a}}, [=] { return probe(exp(a), 8); }});
    cases.push_back({"sigmoid", {{"a", a}}, [=] { return probe(sigmoid(a), 9); }});
  }
  {
    Tensor a = leaf_away_from({3, 4}, rng, {0.0}, 1e-3);
    cases.push_back({"relu", {{"a", a}}, [=] { return probe(relu(a), 10); }});
    Tensor c = leaf_away_from({3, 4}, rng, {-0.5, 0.5}, 1e-3);
    cases.push_back({"clamp", {{"a", c}}, [=] { return probe(clamp(c, -0.5, 0.5), 11); }});
  }
  {
    Tensor a = random_leaf({2, 4, 3}, rng);
    cases.push_back({"cumsum_exclusive", {{"a", a}}, [=] { return probe(cumsum(a, 1, true), 12); }});
    cases.push_back({"cumsum_inclusive", {{"a", a}}, [=] { return probe(cumsum(a, 2, false), 13); }});
    cases.push_back({"sum_axis", {{"a", a}}, [=] { return probe(sum(a, 1), 14); }});
    cases.push_back({"mean_axis", {{"a", a}}, [=] { return probe(mean(a, 0), 15); }});
    cases.push_back({"softmax_last", {{"a", a}}, [=] { return probe(softmax(a, 2), 16); }});
    cases.push_back({"softmax_middle", {{"a", a}}, [=] { return probe(softmax(a, 1), 17); }});
    cases.push_back({"reshape_permute", {{"a", a}},
                     [=] { return probe(permute(reshape(a, {4, 2, 3}), {2, 0, 1}), 18); }});
    cases.push_back({"repeat_last", {{"a", a}}, [=] { return probe(repeat_last(a, 2), 19); }});
  }
  {
    Tensor x = random_leaf({2, 3, 5}, rng), g = random_leaf({5}, rng), b = random_leaf({5}, rng);
    cases.push_back({"layer_norm", {{"x", x}, {"gamma", g}, {"beta", b}},
                     [=] { return probe(layer_norm(x, g, b), 20); }});
  }
  {
    Tensor x = random_leaf({5, 4}, rng);
    const AttentionParams lit = AttentionParams::literal(4);
    cases.push_back({"self_attention_literal", {{"x", x}},
                     [=] { return probe(self_attention(x, lit), 21); }});
  }
  {
    Tensor x = random_leaf({2, 3, 4}, rng);
    const AttentionParams att = AttentionParams::init(4, 2, rng);
    ParameterList leaves{{"x", x}};
    att.collect("attention", leaves);
    cases.push_back({"self_attention_projected", leaves,
                     [=] { return probe(self_attention(x, att), 22); }});
  }
  {
    Tensor x = random_leaf({2, 3, 4}, rng);
    const BlockParams block = BlockParams::init(4, 2, 2, AttentionMode::projected, rng);
    ParameterList leaves{{"x", x}};
    block.collect("block", leaves);
    // Move LN parameters off their identity init so their gradients matter.
    for (auto& p : leaves) {
      if (p.name.find("ln_") != std::string::npos) {
        for (auto& v : p.tensor.mutable_values()) v += rng.uniform(-0.3, 0.3);
      }
    }
    cases.push_back({"transformer_block", leaves,
                     [=] { return probe(transformer_block(x, block), 23); }});
  }
  {
    const RayPointBatch batch = random_ray_points(2, 3, rng);
    const EmbedderParams params = EmbedderParams::init(4, 2, 1, rng);
    ParameterList leaves;
    params.collect("embedder", leaves);
    cases.push_back({"embed", leaves, [=] { return probe(embed(batch, params), 24); }});
  }
  {
    Tensor f = random_leaf({2, 4, 3}, rng);
    Tensor deltas = random_data({2, 4}, rng, 0.1, 0.6);
    cases.push_back({"feature_modulation", {{"features", f}},
                     [=] { return probe(feature_modulation(f, deltas), 25); }});
  }
  {
    Tensor sigma = random_leaf({2, 4}, rng, 0.0, 2.0);
    Tensor color = random_leaf({2, 4, 3}, rng, 0.0, 1.0);
    Tensor deltas = random_data({2, 4}, rng, 0.1, 0.6);
    cases.push_back({"volume_render", {{"sigma", sigma}, {"color", color}},
                     [=] { return probe(volume_render(sigma, color, deltas), 26); }});
  }
  {
    Tensor c = random_leaf({4, 3}, rng, 0.0, 1.0);
    Tensor target = random_data({4, 3}, rng, 0.0, 1.0);
    cases.push_back({"l2_loss", {{"colors", c}}, [=] { return l2_loss(c, target); }});
  }
  for (Variant v : {Variant::nerfa, Variant::vania, Variant::no_fm, Variant::no_rt,
                    Variant::no_pt, Variant::nerf}) {
    ModelConfig cfg;
    cfg.variant = v;
    cfg.d = 4;
    cfg.heads = 2;
    cfg.layers = 1;
    cfg.n_freq_pos = 2;
    cfg.n_freq_dir = 1;
    cfg.seed = 7;
    const NeRFAModel model = NeRFAModel::create(cfg);
    const RayPointBatch batch = random_ray_points(2, 3, rng);
    ParameterList leaves = model.parameters();
    for (auto& p : leaves) {
      if (p.name.find("ln_") != std::string::npos) {
        for (auto& val : p.tensor.mutable_values()) val += rng.uniform(-0.3, 0.3);
      }
    }
    cases.push_back({"forward_" + std::string(variant_name(v)), leaves,
                     [=] { return probe(forward(model, batch), 27); }});
  }
  return cases;
}

}  // namespace

std::vector<double> gradient_errors(const std::function<Tensor()>& loss_fn,
                                    std::vector<Tensor> leaves, double step) {
  for (auto& leaf : leaves) leaf.zero_grad();
  backward(loss_fn());

  std::vector<double> errors;
  NoGradGuard no_grad;
  for (auto& leaf : leaves) {
    const std::vector<double> analytic =
        leaf.has_grad() ? std::vector<double>(leaf.grad().begin(), leaf.grad().end())
                        : std::vector<double>(leaf.numel(), 0.0);
    auto values = leaf.mutable_values();
    double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + step;
      const double up = loss_fn().item();
      values[i] = saved - step;
      const double down = loss_fn().item();
      values[i] = saved;
      const double numeric = (up - down) / (2.0 * step);
      diff2 += (analytic[i] - numeric) * (analytic[i] - numeric);
      a2 += analytic[i] * analytic[i];
      n2 += numeric * numeric;
    }
    const double denom = std::max({std::sqrt(a2), std::sqrt(n2), 1e-7});
    errors.push_back(std::sqrt(diff2) / denom);
  }
  return errors;
}

std::vector<GradCheckResult> run_gradient_suite(double tolerance) {
  std::vector<GradCheckResult> results;
  for (const auto& c : build_cases()) {
    std::vector<Tensor> leaves;
    for (const auto& p : c.leaves) leaves.push_back(p.tensor);
    const auto errors = gradient_errors(c.loss, leaves);
    GradCheckResult r;
    r.name = c.name;
    for (std::size_t i = 0; i < errors.size(); ++i) {
      if (errors[i] >= r.rel_error) {
        r.rel_error = errors[i];
        r.worst_leaf = c.leaves[i].name;
      }
    }
    r.passed = r.rel_error < tolerance;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace seqview
