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
#include <limits>

#include "seqview/error.hpp"
#include "seqview/experiment.hpp"
#include "seqview/metrics.hpp"
#include "seqview/ops.hpp"
#include "seqview/training.hpp"
#include "test_util.hpp"

namespace seqview {
namespace {

using testing::bitwise_equal;
using testing::random_tensor;

Image random_image(std::size_t h, std::size_t w, Rng& rng) {
  Image img(h, w);
  for (auto& v : img.pixels) v = rng.uniform();
  return img;
}

TEST(L2Loss, Examples) {
  Rng rng(1);
  Tensor c = random_tensor({5, 3}, rng, 0.0, 1.0);
  EXPECT_EQ(l2_loss(c, c).item(), 0.0);
  for (std::size_t n_p : {1u, 4u, 9u}) {
    Tensor a({n_p, 3}, std::vector<double>(n_p * 3, 0.3));
    Tensor b({n_p, 3}, std::vector<double>(n_p * 3, 0.2));
    EXPECT_NEAR(l2_loss(a, b).item(), 0.03, 1e-15);
  }
  EXPECT_THROW(l2_loss(c, Tensor({4, 3})), ShapeError);
}

TEST(L2Loss, Gradient) {
  Rng rng(2);
  Tensor c = random_tensor({4, 3}, rng, 0.0, 1.0, true);
  Tensor gt = random_tensor({4, 3}, rng, 0.0, 1.0);
  backward(l2_loss(c, gt));
  for (std::size_t i = 0; i < 12; ++i) {
    EXPECT_NEAR(c.grad()[i], 2.0 * (c.value(i) - gt.value(i)) / 4.0, 1e-15);
  }
}

ParameterList single_param(double value, double grad) {
  Tensor t({1}, std::vector<double>{value}, true);
  t.mutable_grad()[0] = grad;
  return {{"w", t}};
}

TEST(Adam, ZeroGradientLeavesParametersUnchanged) {
  ParameterList params = single_param(0.75, 0.0);
  AdamState state = AdamState::for_parameters(params);
  adam_step(params, state, 5e-4);
  EXPECT_EQ(params[0].tensor.value(0), 0.75);
  EXPECT_EQ(state.step, 1u);
}

TEST(Adam, FirstStepHandValue) {
  ParameterList params = single_param(0.0, 1.0);
  AdamState state = AdamState::for_parameters(params);
  adam_step(params, state, 5e-4);
  EXPECT_NEAR(-params[0].tensor.value(0), 5e-4 / (1.0 + 1e-8), 1e-18);
  EXPECT_NEAR(-params[0].tensor.value(0), 4.99999e-4, 1e-9);
}

TEST(Adam, TwoConstantStepsMoveTwiceLr) {
  ParameterList params = single_param(0.0, 1.0);
  AdamState state = AdamState::for_parameters(params);
  adam_step(params, state, 5e-4);
  params[0].tensor.mutable_grad()[0] = 1.0;
  adam_step(params, state, 5e-4);
  EXPECT_NEAR(-params[0].tensor.value(0), 1e-3, 1e-6 * 5e-4);
}

TEST(Adam, FirstUpdateOpposesGradientSign) {
  Rng rng(3);
  Tensor t = random_tensor({20}, rng, -1.0, 1.0, true);
  const std::vector<double> before(t.values().begin(), t.values().end());
  auto g = t.mutable_grad();
  for (auto& v : g) v = rng.uniform(-2.0, 2.0);
  const std::vector<double> grad(g.begin(), g.end());
  ParameterList params{{"t", t}};
  AdamState state = AdamState::for_parameters(params);
  adam_step(params, state, 1e-3);
  for (std::size_t i = 0; i < 20; ++i) {
    const double moved = t.value(i) - before[i];
    EXPECT_LT(moved * grad[i], 0.0);
  }
}

TEST(LrSchedule, Examples) {
  EXPECT_EQ(lr_schedule(5e-4, 5e-5, 0), 5e-4);
  EXPECT_NEAR(lr_schedule(5e-4, 5e-5, 20000), 5e-4 * std::exp(-1.0), 1e-18);
  EXPECT_NEAR(lr_schedule(5e-4, 5e-5, 20000), 1.8394e-4, 1e-8);
  double prev = lr_schedule(1e-3, 1e-3, 0);
  for (std::size_t s = 1; s < 5000; s += 7) {
    const double lr = lr_schedule(1e-3, 1e-3, s);
    EXPECT_LE(lr, prev);
    prev = lr;
  }
  EXPECT_EQ(lr_schedule(1e-3, 0.0, 123456), 1e-3);
}

TEST(Psnr, Units) {
  EXPECT_EQ(psnr_from_mse(0.01), 20.0);
  EXPECT_EQ(psnr_from_mse(1.0), 0.0);
  EXPECT_EQ(psnr_from_mse(0.0), std::numeric_limits<double>::infinity());

  Image a(10, 10, 0.0), b(10, 10, 0.0);
  for (std::size_t i = 0; i < 12; ++i) b.pixels[i * 25] = 0.5;  // 12 of 300 entries
  EXPECT_EQ(mse(a, b), 0.01);
  EXPECT_EQ(psnr(a, b), 20.0);
  EXPECT_EQ(psnr(a, Image(10, 10, 1.0)), 0.0);
  EXPECT_EQ(psnr(b, b), std::numeric_limits<double>::infinity());
}

TEST(Psnr, Symmetric) {
  Rng rng(4);
  const Image a = random_image(8, 9, rng), b = random_image(8, 9, rng);
  EXPECT_EQ(psnr(a, b), psnr(b, a));
  EXPECT_THROW(psnr(a, Image(9, 8)), ShapeError);
}

TEST(Ssim, IdenticalIsExactlyOne) {
  Rng rng(5);
  for (auto [h, w] : {std::pair{16u, 16u}, std::pair{7u, 9u}, std::pair{20u, 13u}}) {
    const Image a = random_image(h, w, rng);
    EXPECT_EQ(ssim(a, a), 1.0);
  }
  EXPECT_EQ(ssim(Image(12, 12, 0.4), Image(12, 12, 0.4)), 1.0);
}

TEST(Ssim, Symmetric) {
  Rng rng(6);
  const Image a = random_image(16, 16, rng), b = random_image(16, 16, rng);
  EXPECT_EQ(ssim(a, b), ssim(b, a));
}

TEST(Ssim, AntiCorrelatedIsNegative) {
  Image ref(16, 16);
  for (std::size_t r = 0; r < 16; ++r)
    for (std::size_t c = 0; c < 16; ++c)
      for (std::size_t k = 0; k < 3; ++k) ref.at(r, c, k) = ((r + c) % 2 == 0) ? 0.9 : 0.1;
  Image inv = ref;
  for (auto& v : inv.pixels) v = 1.0 - v;
  EXPECT_LT(ssim(ref, inv), 0.0);
}

TEST(Ssim, SingleWindowMatchesDirectFormula) {
  Rng rng(7);
  const Image a = random_image(11, 11, rng), b = random_image(11, 11, rng);
  double w[121], total = 0.0;
  for (int y = 0; y < 11; ++y)
    for (int x = 0; x < 11; ++x) total += w[y * 11 + x] = std::exp(-((x - 5) * (x - 5) + (y - 5) * (y - 5)) / 4.5);
  double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
  auto gray = [](const Image& img, int i) {
    return (img.pixels[i * 3] + img.pixels[i * 3 + 1] + img.pixels[i * 3 + 2]) / 3.0;
  };
  for (int i = 0; i < 121; ++i) {
    mx += w[i] / total * gray(a, i);
    my += w[i] / total * gray(b, i);
  }
  for (int i = 0; i < 121; ++i) {
    const double dx = gray(a, i) - mx, dy = gray(b, i) - my;
    sxx += w[i] / total * dx * dx;
    syy += w[i] / total * dy * dy;
    sxy += w[i] / total * dx * dy;
  }
  const double c1 = 1e-4, c2 = 9e-4;
  const double want = (2 * mx * my + c1) * (2 * sxy + c2) / ((mx * mx + my * my + c1) * (sxx + syy + c2));
  EXPECT_NEAR(ssim(a, b), want, 1e-12);
}

TEST(Ssim, ConstantImagesReduceToLuminanceTerm) {
  const double c1 = 1e-4;
  const double want = (2 * 0.25 * 0.75 + c1) / (0.25 * 0.25 + 0.75 * 0.75 + c1);
  EXPECT_NEAR(ssim(Image(16, 16, 0.25), Image(16, 16, 0.75)), want, 1e-12);
  EXPECT_NEAR(want, 0.60006, 1e-5);
}

TEST(Ssim, TooSmallThrows) { EXPECT_THROW(ssim(Image(6, 20), Image(6, 20)), DomainError); }

TrainConfig small_train_config(std::size_t iterations) {
  TrainConfig cfg;
  cfg.n_p = 16;
  cfg.n_r = 8;
  cfg.lr0 = 2e-3;
  cfg.decay = 5e-4;
  cfg.iterations = iterations;
  cfg.seed = 3;
  cfg.eval_every = 3;
  return cfg;
}

ModelConfig small_model_config() {
  ModelConfig cfg;
  cfg.d = 8;
  cfg.heads = 2;
  cfg.n_freq_pos = 2;
  cfg.n_freq_dir = 1;
  cfg.seed = 3;
  return cfg;
}

std::vector<double> flatten(const NeRFAModel& model) {
  std::vector<double> out;
  for (const auto& p : model.parameters()) out.insert(out.end(), p.tensor.values().begin(), p.tensor.values().end());
  return out;
}

TEST(Train, ZeroIterationsIsNoOp) {
  NeRFAModel model = NeRFAModel::create(small_model_config());
  const auto before = flatten(model);
  const TrainLog log = train(model, toy_scene(), small_train_config(0));
  EXPECT_TRUE(log.records.empty());
  EXPECT_TRUE(bitwise_equal(flatten(model), before));
}

TEST(Train, BitwiseReproducible) {
  const Scene scene = toy_scene();
  NeRFAModel a = NeRFAModel::create(small_model_config());
  NeRFAModel b = NeRFAModel::create(small_model_config());
  const TrainLog la = train(a, scene, small_train_config(7));
  const TrainLog lb = train(b, scene, small_train_config(7));
  EXPECT_EQ(la, lb);
  ASSERT_EQ(la.records.size(), 3u);  // steps 3, 6 and the final 7
  EXPECT_EQ(la.records.back().step, 7u);
  EXPECT_TRUE(bitwise_equal(flatten(a), flatten(b)));
  EXPECT_EQ(la.to_csv(), lb.to_csv());
  EXPECT_EQ(la.to_csv().substr(0, 17), "step,loss,lr,psnr");
}

TEST(Train, ResumeMatchesUninterruptedRun) {
  const Scene scene = toy_scene();
  NeRFAModel full = NeRFAModel::create(small_model_config());
  const TrainLog full_log = train(full, scene, small_train_config(10));

  NeRFAModel part = NeRFAModel::create(small_model_config());
  TrainState state;
  TrainLog log = train(part, scene, small_train_config(6), state);
  EXPECT_EQ(state.step, 6u);
  const TrainLog rest = train(part, scene, small_train_config(10), state);
  log.records.insert(log.records.end(), rest.records.begin(), rest.records.end());
  EXPECT_EQ(log, full_log);
  EXPECT_TRUE(bitwise_equal(flatten(part), flatten(full)));
}

TEST(Train, LossHalvesWithinTwoHundredSteps) {
  const Scene scene = toy_scene();
  RunConfig cfg = toy_run_config();
  cfg.train.eval_every = 1000;

  NeRFAModel probe = NeRFAModel::create(cfg.model);
  TrainConfig first = cfg.train;
  first.iterations = 1;
  const double initial = train(probe, scene, first).records.at(0).loss;

  NeRFAModel model = NeRFAModel::create(cfg.model);
  cfg.train.iterations = 200;
  const TrainLog log = train(model, scene, cfg.train);
  ASSERT_EQ(log.records.size(), 1u);
  EXPECT_TRUE(std::isfinite(log.records[0].loss));
  EXPECT_LT(log.records[0].loss, 0.5 * initial);
}

TEST(Train, InvalidConfigThrows) {
  NeRFAModel model = NeRFAModel::create(small_model_config());
  TrainConfig cfg = small_train_config(5);
  cfg.n_p = 0;
  EXPECT_THROW(train(model, toy_scene(), cfg), ConfigError);
  cfg = small_train_config(5);
  cfg.lr0 = 0.0;
  EXPECT_THROW(train(model, toy_scene(), cfg), ConfigError);

  TrainState mismatched;
  mismatched.adam.m.resize(1);
  mismatched.adam.v.resize(1);
  EXPECT_THROW(train(model, toy_scene(), small_train_config(5), mismatched), ContractError);
}

TEST(Train, NonFiniteLossAborts) {
  NeRFAModel model = NeRFAModel::create(small_model_config());
  for (auto& v : model.head.bias.mutable_values()) v = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(train(model, toy_scene(), small_train_config(2)), NumericalError);
}

}  // namespace
}  // namespace seqview
