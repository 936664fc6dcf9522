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
#include <filesystem>
#include <optional>

#include "seqview/config.hpp"
#include "seqview/model.hpp"
#include "seqview/training.hpp"

namespace seqview {

inline constexpr char kCheckpointMagic[4] = {'N', 'R', 'F', 'A'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

// Binary layout, all integers and reals little-endian:
//   "NRFA" | u32 version | u32 config length | config text
//   then until end of file, one section each:
//   u32 name length | name | u64 element count | f64[count]
// Sections: every model parameter by name; "train.step"; and, when
// optimizer state is saved, "adam.step", "adam.m.<param>", "adam.v.<param>".

struct LoadedCheckpoint {
  RunConfig config;
  NeRFAModel model;
  std::optional<TrainState> state;
};

/// Writes atomically (temporary file, then rename).
void save_checkpoint(const NeRFAModel& model, const RunConfig& config, const TrainState* state,
                     const std::filesystem::path& path);

/// Validates magic, version, config and every section length and name
/// before building the model. Throws FormatError naming the offending
/// field, IoError when the file cannot be read.
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace seqview
