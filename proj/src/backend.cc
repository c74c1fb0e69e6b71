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

#include "cvaug/backend.h"

#include <sstream>
#include <unordered_map>

#include "cvaug/augment.h"
#include "cvaug/error.h"
#include "cvaug/io.h"
#include "cvaug/process.h"
#include "cvaug/wav.h"
#include "json.hpp"

namespace cvaug {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<JobOutcome> PitchBackend::run_batch(std::span<const BackendJob> jobs,
                                                const fs::path&) {
  std::vector<JobOutcome> out;
  for (const auto& job : jobs) {
    try {
      if (!job.cents) throw Error(ErrorKind::kBackend, "pitch backend needs a cents value");
      const AudioBuffer in = read_wav(job.source_wav);
      write_wav(job.output_wav, pitch_shift(in, *job.cents, params_));
      out.push_back({true, ""});
    } catch (const std::exception& e) {
      out.push_back({false, e.what()});
    }
  }
  return out;
}

std::optional<double> StandinVcBackend::target_f0(const BackendJob& job) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = target_f0_cache_.find(job.target_speaker); it != target_f0_cache_.end())
      return it->second;
  }
  std::vector<double> voiced;
  for (const auto& ref : job.target_ref_wavs) {
    const AudioBuffer audio = read_wav(ref);
    if (audio.duration() < 0.04) continue;
    const auto v = estimate_f0(audio).voiced_values();
    voiced.insert(voiced.end(), v.begin(), v.end());
  }
  std::optional<double> f0;
  if (!voiced.empty()) f0 = median(voiced);
  std::lock_guard<std::mutex> lock(mu_);
  target_f0_cache_.try_emplace(job.target_speaker, f0);
  return f0;
}

std::vector<JobOutcome> StandinVcBackend::run_batch(std::span<const BackendJob> jobs,
                                                    const fs::path&) {
  std::vector<JobOutcome> out;
  for (const auto& job : jobs) {
    try {
      const AudioBuffer in = read_wav(job.source_wav);
      const F0Track track = estimate_f0(in);
      if (!track.median_f0) {
        out.push_back({false, "unvoiced source " + job.source_wav.filename().string()});
        continue;
      }
      const auto tgt = target_f0(job);
      if (!tgt) {
        out.push_back({false, "target speaker \"" + job.target_speaker + "\" has no voiced frames"});
        continue;
      }
      write_wav(job.output_wav, standin_convert(in, *track.median_f0, *tgt, params_));
      out.push_back({true, ""});
    } catch (const std::exception& e) {
      out.push_back({false, e.what()});
    }
  }
  return out;
}

std::vector<JobOutcome> ExternalBackend::run_batch(std::span<const BackendJob> jobs,
                                                   const fs::path& work_dir) {
  if (work_dir.empty()) throw Error(ErrorKind::kBackend, "external backend needs a working directory");
  std::string batch;
  for (const auto& job : jobs) {
    json j;
    j["source_wav"] = job.source_wav.string();
    j["target_speaker"] = job.target_speaker;
    json refs = json::array();
    for (const auto& r : job.target_ref_wavs) refs.push_back(r.string());
    j["target_ref_wavs"] = std::move(refs);
    j["output_wav"] = job.output_wav.string();
    if (job.cents) j["cents"] = *job.cents;
    batch += j.dump() + "\n";
    fs::create_directories(job.output_wav.parent_path());
  }
  const fs::path batch_path = work_dir / "batch.jsonl";
  write_text_file(batch_path, batch);

  const int code = run_command(command_, {batch_path.string()}, work_dir);
  std::vector<JobOutcome> out(jobs.size());
  if (code == 0) {
    for (const auto& job : jobs) {
      if (!fs::exists(job.output_wav)) {
        throw Error(ErrorKind::kBackend,
                    "output missing after backend exit: " + job.output_wav.string());
      }
    }
    for (auto& o : out) o.ok = true;
    return out;
  }

  std::unordered_map<std::string, JobOutcome> status;
  const fs::path status_path = work_dir / "status.jsonl";
  if (fs::exists(status_path)) {
    std::istringstream in(read_text_file(status_path));
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        const json j = json::parse(line);
        JobOutcome o;
        o.ok = j.at("ok").get<bool>();
        o.message = j.value("message", "");
        status[j.at("output_wav").get<std::string>()] = o;
      } catch (const json::exception&) {
        throw Error(ErrorKind::kBackend, "malformed backend status line: " + line);
      }
    }
  }
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto it = status.find(jobs[i].output_wav.string());
    if (it == status.end()) {
      out[i] = {false, "backend exited with code " + std::to_string(code) +
                           " and reported no status for this job"};
    } else if (it->second.ok && !fs::exists(jobs[i].output_wav)) {
      out[i] = {false, "backend reported success but output is missing"};
    } else {
      out[i] = it->second;
      if (!out[i].ok && out[i].message.empty()) out[i].message = "backend reported failure";
    }
  }
  return out;
}

std::unique_ptr<ConversionBackend> make_conversion_backend(std::string_view spec,
                                                           const WsolaParams& params) {
  if (spec == "pitch") return std::make_unique<PitchBackend>(params);
  if (spec == "standin-vc") return std::make_unique<StandinVcBackend>(params);
  if (spec.empty()) throw Error(ErrorKind::kUsage, "no conversion backend configured");
  return std::make_unique<ExternalBackend>(std::string(spec));
}

}  // namespace cvaug
