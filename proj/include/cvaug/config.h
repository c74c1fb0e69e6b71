// Copyright (c) 2026 The cvaug Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CVAUG_CONFIG_H_
#define CVAUG_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "cvaug/corpus.h"
#include "cvaug/dsp.h"
#include "cvaug/pairing.h"

namespace cvaug {

/// Run configuration, read from a "key = value" file:
///
///   # comment
///   seed = 20240901
///   vc_backend = standin-vc          # or pitch, or an external command
///   asr_backend = echo               # or scripted:<file>, or a command
///   output_dir = runs/exp1
///   jobs = 4
///   wsola.segment = 0.05             # seconds
///   wsola.search_radius = 0.01
///   wsola.overlap = 0.0125
///   pitch.cents_low = 250
///   pitch.cents_high = 370
///   pitch.per_speaker = 2
///   pitch.age_groups = child,teen
///   pairs.strategy = top             # top | random | last
///   pairs.k = 2
///   pairs.max_folds = 10
///   augment.min_duration = 0.1
///   paths.<name> = <file>            # must exist
///
/// Relative paths resolve against the config file's directory. Unknown and
/// repeated keys are errors. CVAUG_VC_BACKEND and CVAUG_ASR_BACKEND override
/// the backend commands; nothing else reads the environment.
struct RunConfig {
  std::optional<std::uint64_t> seed;
  std::string vc_backend = "standin-vc";
  std::string asr_backend = "echo";
  std::filesystem::path output_dir;
  unsigned jobs = 0;  // 0 = one per logical CPU
  WsolaParams wsola;
  int pitch_cents_low = 250;
  int pitch_cents_high = 370;
  std::size_t pitch_per_speaker = 2;
  std::set<AgeGroup> pitch_age_groups{AgeGroup::kChild, AgeGroup::kTeen};
  PairStrategy pair_strategy = PairStrategy::kTop;
  std::size_t pair_k = 2;
  std::size_t max_folds = 10;
  double min_duration = 0.1;
  std::map<std::string, std::filesystem::path> paths;

  /// The seed, or Error(kUsage) naming `what` when none is configured.
  std::uint64_t require_seed(std::string_view what) const;
};

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                       std::string_view name = "config");
RunConfig load_config(const std::filesystem::path& path);

using EnvLookup = std::function<std::optional<std::string>(const char*)>;

// Applies backend overrides; `env` defaults to the process environment.
void apply_env_overrides(RunConfig& config, const EnvLookup& env = {});

/// Checks ranges and that every paths.* entry exists. Throws Error.
void validate_config(const RunConfig& config);

}  // namespace cvaug

#endif  // CVAUG_CONFIG_H_
