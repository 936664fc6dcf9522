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

#include <benchmark/benchmark.h>

#include "seqview/model.hpp"
#include "seqview/ops.hpp"

namespace seqview {
namespace {

constexpr std::size_t kWidth = 32;
constexpr std::size_t kHeads = 4;

Tensor features(std::size_t n_p, std::size_t n_r, Rng& rng) {
  std::vector<double> v(n_p * n_r * kWidth);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return Tensor({n_p, n_r, kWidth}, std::move(v));
}

void report_madds(benchmark::State& state, std::uint64_t madds) {
  state.counters["madds"] = static_cast<double>(madds);
  state.counters["madds/s"] =
      benchmark::Counter(static_cast<double>(madds), benchmark::Counter::kIsIterationInvariantRate);
}

// One transformer block over every ray point of the batch.
void BM_GlobalAttention(benchmark::State& state) {
  const auto n_p = static_cast<std::size_t>(state.range(0));
  const auto n_r = static_cast<std::size_t>(state.range(1));
  Rng rng(1);
  const BlockParams block = BlockParams::init(kWidth, kHeads, 1, AttentionMode::projected, rng);
  const Tensor x = features(n_p, n_r, rng);
  NoGradGuard no_grad;
  for (auto _ : state) benchmark::DoNotOptimize(global_transformer(x, block));
  ModelConfig cfg;
  cfg.d = kWidth;
  report_madds(state, count_madds(cfg, n_p, n_r).global);
}

// Shared transformer block applied to each ray separately.
void BM_RayAttention(benchmark::State& state) {
  const auto n_p = static_cast<std::size_t>(state.range(0));
  const auto n_r = static_cast<std::size_t>(state.range(1));
  Rng rng(2);
  const BlockParams block = BlockParams::init(kWidth, kHeads, 1, AttentionMode::projected, rng);
  const Tensor x = features(n_p, n_r, rng);
  NoGradGuard no_grad;
  for (auto _ : state) benchmark::DoNotOptimize(ray_transformer(x, block));
  ModelConfig cfg;
  cfg.d = kWidth;
  report_madds(state, count_madds(cfg, n_p, n_r).ray);
}

// Transformer block across the per-pixel features; N_r does not enter.
void BM_PixelAttention(benchmark::State& state) {
  const auto n_p = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  const BlockParams block = BlockParams::init(kWidth, kHeads, 1, AttentionMode::projected, rng);
  const Tensor x = reshape(features(n_p, 1, rng), {n_p, kWidth});
  NoGradGuard no_grad;
  for (auto _ : state) benchmark::DoNotOptimize(pixel_transformer(x, block));
  ModelConfig cfg;
  cfg.d = kWidth;
  report_madds(state, count_madds(cfg, n_p, 1).pixel);
}

void BM_FeatureModulation(benchmark::State& state) {
  const auto n_p = static_cast<std::size_t>(state.range(0));
  const auto n_r = static_cast<std::size_t>(state.range(1));
  Rng rng(4);
  const Tensor x = features(n_p, n_r, rng);
  std::vector<double> gaps(n_p * n_r);
  for (auto& g : gaps) g = rng.uniform(0.01, 0.1);
  const Tensor deltas({n_p, n_r}, std::move(gaps));
  NoGradGuard no_grad;
  for (auto _ : state) benchmark::DoNotOptimize(feature_modulation(x, deltas));
}

// Forward plus backward of one training batch.
void BM_TrainStepForwardBackward(benchmark::State& state) {
  ModelConfig cfg;
  cfg.variant = static_cast<Variant>(state.range(0));
  cfg.d = kWidth;
  cfg.heads = kHeads;
  cfg.n_freq_pos = 6;
  cfg.n_freq_dir = 2;
  const NeRFAModel model = NeRFAModel::create(cfg);
  Rng rng(5);
  RayPointBatch batch;
  std::vector<double> pts(32 * 16 * 6);
  for (auto& p : pts) p = rng.uniform(-1.0, 1.0);
  batch.points = Tensor({32, 16, 6}, std::move(pts));
  batch.deltas = Tensor({32, 16}, std::vector<double>(32 * 16, 0.25));
  for (auto _ : state) {
    Tensor loss = sum_all(forward(model, batch));
    backward(loss);
    for (const auto& p : model.parameters()) {
      Tensor t = p.tensor;
      t.zero_grad();
    }
  }
  state.SetLabel(std::string(variant_name(cfg.variant)));
}

BENCHMARK(BM_GlobalAttention)->ArgsProduct({{8, 16, 32, 64}, {16}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RayAttention)->ArgsProduct({{8, 16, 32, 64}, {16}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RayAttention)->ArgsProduct({{32}, {8, 16, 32, 64}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PixelAttention)->Arg(8)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FeatureModulation)->Args({32, 16})->Args({128, 64})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TrainStepForwardBackward)
    ->DenseRange(static_cast<int>(Variant::vania), static_cast<int>(Variant::nerf))
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace seqview

BENCHMARK_MAIN();
