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

#ifndef CVAUG_AUGMENT_H_
#define CVAUG_AUGMENT_H_

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "cvaug/audio.h"
#include "cvaug/corpus.h"
#include "cvaug/dsp.h"
#include "cvaug/pairing.h"

namespace cvaug {

class ConversionBackend;

enum class VcMode { kMonolingual, kCrosslingual };

std::string_view to_string(VcMode m);
VcMode parse_vc_mode(std::string_view s);

struct PitchJob {
  std::string source_utterance_id;
  int cents = 0;
  std::string output_utterance_id;  // <source_id>__ps<cents>
  std::string output_speaker_id;    // <speaker>__ps<cents>
  std::string output_path;          // relative to the execution output dir
  double source_duration = 0.0;
};

struct VcJob {
  std::string source_utterance_id;
  std::string target_speaker_id;
  VcMode mode = VcMode::kCrosslingual;
  std::string output_utterance_id;  // <source_id>__vc_<target>
  std::string output_speaker_id;    // <source speaker>__x__<target>
  std::string output_path;
  double source_duration = 0.0;
};

using AugmentJob = std::variant<PitchJob, VcJob>;

const std::string& source_utterance_of(const AugmentJob& job);
const std::string& output_utterance_of(const AugmentJob& job);
double source_duration_of(const AugmentJob& job);

struct PlanExclusion {
  std::string utterance_id;
  std::string reason;
};

struct AugmentationPlan {
  std::vector<AugmentJob> jobs;
  double expected_added_hours = 0.0;  // sum of job source durations / 3600
  std::vector<PlanExclusion> excluded;
  std::uint64_t seed = 0;
};

struct PitchPlanOptions {
  std::set<AgeGroup> age_groups;  // empty = every speaker
  int cents_low = 250;
  int cents_high = 370;
  std::size_t per_speaker = 2;
  std::uint64_t seed = 0;
  double min_duration = 0.1;  // shorter utterances are excluded, seconds
};

/// Draws `per_speaker` distinct integer cents values per speaker from
/// [cents_low, cents_high] (sub-seed derive_seed(seed, "pitch/" + speaker))
/// and applies each value to every utterance of that speaker.
AugmentationPlan plan_pitch_augmentation(const Corpus& corpus, const PitchPlanOptions& options);

struct VcPlanOptions {
  double min_duration = 0.1;
};

/// One VC job per (source utterance, selected target). Source speakers come
/// from `sources`, targets from `targets` (may be the same corpus for
/// monolingual conversion). Every pair must agree with `mode`.
AugmentationPlan plan_vc_augmentation(const Corpus& sources, const Corpus& targets,
                                      const PairSelection& selection, VcMode mode,
                                      const VcPlanOptions& options = {});

/// Test double for a neural converter: shifts the source by
/// 1200 * log2(target_f0 / source_f0) cents, clamped to +-1200.
AudioBuffer standin_convert(const AudioBuffer& source, double source_f0,
                            double target_median_f0, const WsolaParams& params = {});

// Cents applied by standin_convert for the given F0 pair.
double standin_cents(double source_f0, double target_median_f0);

struct ExecuteOptions {
  std::filesystem::path out_dir;
  unsigned workers = 1;
};

struct JobFailure {
  std::size_t job_index = 0;
  std::string output_utterance_id;
  std::string message;
};

struct ExecutionResult {
  Corpus corpus;  // sources re-anchored to out_dir plus every generated record
  std::vector<JobFailure> failures;
  std::size_t succeeded = 0;
  double realized_added_hours = 0.0;
};

/// Runs every job through `backend`, writes generated audio under
/// options.out_dir and assembles the augmented corpus in job order. Per-job
/// failures are reported in the result; launch failures throw.
ExecutionResult execute_plan(const AugmentationPlan& plan, ConversionBackend& backend,
                             const Corpus& sources, const Corpus* targets,
                             const ExecuteOptions& options);

/// Plan as JSON (jobs, exclusions, hours) for --dry-run and audit files.
std::string format_plan(const AugmentationPlan& plan);

}  // namespace cvaug

#endif  // CVAUG_AUGMENT_H_
