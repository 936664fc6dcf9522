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

#include <cstdint>
#include <string>
#include <vector>

#include "seqview/config.hpp"
#include "seqview/scene.hpp"

namespace seqview {

inline constexpr std::uint64_t kToySceneSeed = 7;

/// The canonical toy scene (default_toy_config() rendered with kToySceneSeed).
Scene toy_scene();

/// Desk-scale settings for overfitting the toy scene: d=32, H=4, L=1,
/// 2000 steps.
RunConfig toy_run_config();

struct AblationRow {
  Variant variant = Variant::nerfa;
  double train_psnr = 0.0;  // mean over train views, full images
  double train_ssim = 0.0;
  double test_psnr = 0.0;   // mean over val + test views
  double final_loss = 0.0;
  double seconds = 0.0;
};

/// Trains one model per variant from `base` (variant overridden) on `scene`
/// and scores it.
std::vector<AblationRow> run_ablation(const RunConfig& base, const Scene& scene,
                                      const std::vector<Variant>& variants);

std::string format_ablation_table(const std::vector<AblationRow>& rows);

}  // namespace seqview
