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

#include "seqview/experiment.hpp"

#include <chrono>
#include <cstdio>

#include "seqview/metrics.hpp"
#include "seqview/render.hpp"
#include "seqview/training.hpp"

namespace seqview {

Scene toy_scene() { return generate_toy_scene(kToySceneSeed, default_toy_config()); }

RunConfig toy_run_config() {
  RunConfig cfg;
  cfg.model.variant = Variant::nerfa;
  cfg.model.d = 32;
  cfg.model.heads = 4;
  cfg.model.layers = 1;
  cfg.model.n_freq_pos = 6;
  cfg.model.n_freq_dir = 2;
  cfg.model.seed = 1;
  cfg.train.seed = 1;
  cfg.train.n_p = 32;
  cfg.train.n_r = 16;
  cfg.train.lr0 = 2e-3;
  cfg.train.decay = 5e-4;
  cfg.train.iterations = 2000;
  cfg.train.near = 2.0;
  cfg.train.far = 6.0;
  cfg.train.eval_every = 250;
  return cfg;
}

std::vector<AblationRow> run_ablation(const RunConfig& base, const Scene& scene,
                                      const std::vector<Variant>& variants) {
  std::vector<AblationRow> rows;
  const auto train_views = scene.indices(Split::train);
  auto held_out = scene.indices(Split::val);
  for (auto i : scene.indices(Split::test)) held_out.push_back(i);
  const RenderSettings settings = render_settings(base.train);

  for (Variant v : variants) {
    RunConfig cfg = base;
    cfg.model.variant = v;
    const auto start = std::chrono::steady_clock::now();
    NeRFAModel model = NeRFAModel::create(cfg.model);
    const TrainLog log = train(model, scene, cfg.train);
    AblationRow row;
    row.variant = v;
    row.final_loss = log.records.empty() ? 0.0 : log.records.back().loss;
    double ssim_total = 0.0;
    double psnr_total = 0.0;
    for (auto idx : train_views) {
      const Image img = render_view(model, scene.views[idx].camera, settings);
      psnr_total += psnr(img, scene.views[idx].image);
      ssim_total += ssim(img, scene.views[idx].image);
    }
    row.train_psnr = psnr_total / static_cast<double>(train_views.size());
    row.train_ssim = ssim_total / static_cast<double>(train_views.size());
    row.test_psnr = mean_psnr(model, scene, held_out, settings);
    row.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows.push_back(row);
  }
  return rows;
}

std::string format_ablation_table(const std::vector<AblationRow>& rows) {
  std::string out = "variant  train_psnr  train_ssim  heldout_psnr  final_loss  seconds\n";
  char line[160];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%-7s  %10.3f  %10.4f  %12.3f  %10.5f  %7.1f\n",
                  std::string(variant_name(r.variant)).c_str(), r.train_psnr, r.train_ssim,
                  r.test_psnr, r.final_loss, r.seconds);
    out += line;
  }
  return out;
}

}  // namespace seqview
