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

#include <filesystem>
#include <string>
#include <string_view>

#include "seqview/model.hpp"
#include "seqview/training.hpp"

namespace seqview {

/// Everything a run needs: model shape plus training schedule.
///
/// Text form is flat `key = value` lines; `#` starts a comment. Keys:
/// variant, d, heads, layers, freq_pos, freq_dir, attention_mode, seed,
/// n_p, n_r, lr0, decay, iterations, near, far, eval_every. Unknown keys
/// and malformed values are ConfigErrors naming the key. `seed` drives both
/// parameter initialization and batch sampling.
struct RunConfig {
  ModelConfig model;
  TrainConfig train;

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical text; parse_run_config(to_text(c)) == c exactly.
std::string to_text(const RunConfig& config);

std::string_view attention_mode_name(AttentionMode mode);

}  // namespace seqview
