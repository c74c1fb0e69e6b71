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

#ifndef CVAUG_BACKEND_H_
#define CVAUG_BACKEND_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvaug/dsp.h"

namespace cvaug {

/// One conversion request as seen by a backend. Paths are absolute.
struct BackendJob {
  std::filesystem::path source_wav;
  std::string target_speaker;  // empty for pitch jobs
  std::vector<std::filesystem::path> target_ref_wavs;
  std::filesystem::path output_wav;
  std::optional<int> cents;  // set for pitch jobs
};

struct JobOutcome {
  bool ok = false;
  std::string message;
};

class ConversionBackend {
 public:
  virtual ~ConversionBackend() = default;

  virtual std::string name() const = 0;

  /// Whole-batch backends receive one batch per worker, each with its own
  /// working directory; the others get single-job batches.
  virtual bool batched() const { return false; }

  /// Returns one outcome per job, in order. Throws only for failures that
  /// invalidate the whole batch (e.g. the process cannot be launched).
  virtual std::vector<JobOutcome> run_batch(std::span<const BackendJob> jobs,
                                            const std::filesystem::path& work_dir) = 0;
};

/// Built-in "pitch" backend: WSOLA + resampling pitch shift.
class PitchBackend : public ConversionBackend {
 public:
  explicit PitchBackend(WsolaParams params = {}) : params_(params) {}
  std::string name() const override { return "pitch"; }
  std::vector<JobOutcome> run_batch(std::span<const BackendJob> jobs,
                                    const std::filesystem::path& work_dir) override;

 private:
  WsolaParams params_;
};

/// Built-in "standin-vc" backend: maps the source median F0 onto the target
/// speaker's median F0 measured over its reference recordings.
class StandinVcBackend : public ConversionBackend {
 public:
  explicit StandinVcBackend(WsolaParams params = {}) : params_(params) {}
  std::string name() const override { return "standin-vc"; }
  std::vector<JobOutcome> run_batch(std::span<const BackendJob> jobs,
                                    const std::filesystem::path& work_dir) override;

 private:
  std::optional<double> target_f0(const BackendJob& job);

  WsolaParams params_;
  std::mutex mu_;
  std::map<std::string, std::optional<double>> target_f0_cache_;
};

/// External converter. For every batch the toolkit writes
/// <work_dir>/batch.jsonl with one
///   {"source_wav", "target_speaker", "target_ref_wavs": [...], "output_wav"}
/// object per job and runs `<command> <batch.jsonl>` inside work_dir.
/// Exit 0 means every output_wav must exist. Any other exit status makes the
/// toolkit read <work_dir>/status.jsonl ({"output_wav", "ok", "message"} per
/// line); jobs missing from it are failures.
class ExternalBackend : public ConversionBackend {
 public:
  explicit ExternalBackend(std::string command) : command_(std::move(command)) {}
  std::string name() const override { return "external"; }
  bool batched() const override { return true; }
  std::vector<JobOutcome> run_batch(std::span<const BackendJob> jobs,
                                    const std::filesystem::path& work_dir) override;

 private:
  std::string command_;
};

/// "pitch" and "standin-vc" select the built-ins; anything else is taken as
/// an external command line.
std::unique_ptr<ConversionBackend> make_conversion_backend(std::string_view spec,
                                                           const WsolaParams& params = {});

}  // namespace cvaug

#endif  // CVAUG_BACKEND_H_
