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
#include <filesystem>
#include <functional>
#include <vector>

#include "seqview/model.hpp"
#include "seqview/render.hpp"
#include "seqview/scene.hpp"

namespace seqview {

struct TrainConfig {
  std::size_t n_p = 128;
  std::size_t n_r = 64;
  double lr0 = 5e-4;
  double decay = 5e-5;
  std::size_t iterations = 1000;
  std::uint64_t seed = 0;
  double near = 2.0;
  double far = 6.0;
  std::size_t eval_every = 100;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

struct AdamState {
  static constexpr double beta1 = 0.9;
  static constexpr double beta2 = 0.999;
  static constexpr double eps = 1e-8;

  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  std::uint64_t step = 0;

  static AdamState for_parameters(const ParameterList& params);
};

struct TrainRecord {
  std::size_t step = 0;
  double loss = 0.0;
  double lr = 0.0;
  double psnr = 0.0;
  bool operator==(const TrainRecord&) const = default;
};

struct TrainLog {
  std::vector<TrainRecord> records;

  /// CSV with header `step,loss,lr,psnr`; reals printed round-trip exact.
  std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;
  bool operator==(const TrainLog&) const = default;
};

/// Resumable optimizer position: Adam moments plus the next step index.
struct TrainState {
  AdamState adam;
  std::size_t step = 0;
};

/// Mean over rays of the squared error summed over the 3 channels.
Tensor l2_loss(const Tensor& colors, const Tensor& target);

/// One bias-corrected Adam update using each parameter's current gradient
/// (missing gradients count as zero).
void adam_step(const ParameterList& params, AdamState& state, double lr);

/// lr0 * exp(-decay * step)
double lr_schedule(double lr0, double decay, std::size_t step);

RenderSettings render_settings(const TrainConfig& config);

/// Mean full-image PSNR of the model over the given views.
double mean_psnr(const NeRFAModel& model, const Scene& scene, const std::vector<std::size_t>& views,
                 const RenderSettings& settings);

/// Trains in place until `config.iterations` steps have run. Each step draws
/// a training view and N_p distinct pixels from a generator seeded by
/// (seed, step), so a run resumed from a saved TrainState continues exactly
/// as an uninterrupted one. A record is logged every eval_every steps and at
/// the final step. Throws NumericalError on a non-finite loss.
TrainLog train(NeRFAModel& model, const Scene& scene, const TrainConfig& config,
               TrainState& state);

TrainLog train(NeRFAModel& model, const Scene& scene, const TrainConfig& config);

}  // namespace seqview
