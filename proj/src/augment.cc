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

#include "cvaug/augment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <unordered_map>

#include "cvaug/backend.h"
#include "cvaug/error.h"
#include "cvaug/parallel.h"
#include "cvaug/rng.h"
#include "cvaug/wav.h"
#include "json.hpp"

namespace cvaug {

using nlohmann::json;

std::string_view to_string(VcMode m) {
  return m == VcMode::kMonolingual ? "monolingual" : "crosslingual";
}

VcMode parse_vc_mode(std::string_view s) {
  if (s == "monolingual") return VcMode::kMonolingual;
  if (s == "crosslingual") return VcMode::kCrosslingual;
  throw Error(ErrorKind::kParse, "unknown VC mode \"" + std::string(s) + "\"");
}

const std::string& source_utterance_of(const AugmentJob& job) {
  return std::visit([](const auto& j) -> const std::string& { return j.source_utterance_id; }, job);
}

const std::string& output_utterance_of(const AugmentJob& job) {
  return std::visit([](const auto& j) -> const std::string& { return j.output_utterance_id; }, job);
}

double source_duration_of(const AugmentJob& job) {
  return std::visit([](const auto& j) { return j.source_duration; }, job);
}

namespace {

double expected_hours(const std::vector<AugmentJob>& jobs) {
  double seconds = 0.0;
  for (const auto& j : jobs) seconds += source_duration_of(j);
  return seconds / 3600.0;
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::vector<const UtteranceRecord*> records_of(const Corpus& c, const std::string& speaker) {
  std::vector<const UtteranceRecord*> out;
  for (const auto& r : c.records) {
    if (r.speaker_id == speaker) out.push_back(&r);
  }
  return out;
}

}  // namespace

AugmentationPlan plan_pitch_augmentation(const Corpus& corpus, const PitchPlanOptions& options) {
  if (options.per_speaker < 1) throw Error(ErrorKind::kDomain, "per_speaker must be at least 1");
  if (options.cents_low >= options.cents_high) {
    throw Error(ErrorKind::kDomain, "cents range must satisfy low < high");
  }
  const auto span = static_cast<std::size_t>(options.cents_high - options.cents_low + 1);
  if (options.per_speaker > span) {
    throw Error(ErrorKind::kDomain, "cannot draw " + std::to_string(options.per_speaker) +
                                        " distinct cents values from a range of " +
                                        std::to_string(span));
  }
  std::vector<const SpeakerProfile*> speakers;
  for (const auto& p : corpus.speakers) {
    if (options.age_groups.empty() || options.age_groups.count(p.age_group)) speakers.push_back(&p);
  }
  if (speakers.empty()) throw Error(ErrorKind::kDomain, "no speakers match the pitch-shift filter");

  AugmentationPlan plan;
  plan.seed = options.seed;
  for (const SpeakerProfile* sp : speakers) {
    std::mt19937_64 gen(derive_seed(options.seed, "pitch/" + sp->speaker_id));
    const auto draws = sample_without_replacement(gen, span, options.per_speaker);
    const auto utterances = records_of(corpus, sp->speaker_id);
    for (const auto* r : utterances) {
      if (r->duration < options.min_duration) {
        plan.excluded.push_back({r->utterance_id, "shorter than minimum duration " +
                                                      fmt3(options.min_duration) + " s"});
      }
    }
    for (std::size_t d : draws) {
      const int cents = options.cents_low + static_cast<int>(d);
      const std::string suffix = "__ps" + std::to_string(cents);
      for (const auto* r : utterances) {
        if (r->duration < options.min_duration) continue;
        PitchJob job;
        job.source_utterance_id = r->utterance_id;
        job.cents = cents;
        job.output_utterance_id = r->utterance_id + suffix;
        job.output_speaker_id = sp->speaker_id + suffix;
        job.output_path = "audio/" + job.output_utterance_id + ".wav";
        job.source_duration = r->duration;
        plan.jobs.emplace_back(std::move(job));
      }
    }
  }
  plan.expected_added_hours = expected_hours(plan.jobs);
  return plan;
}

AugmentationPlan plan_vc_augmentation(const Corpus& sources, const Corpus& targets,
                                      const PairSelection& selection, VcMode mode,
                                      const VcPlanOptions& options) {
  std::unordered_map<std::string, std::vector<std::string>> targets_by_source;
  for (const auto& p : selection.pairs) {
    const SpeakerProfile* src = sources.find_speaker(p.source_speaker);
    const SpeakerProfile* tgt = targets.find_speaker(p.target_speaker);
    if (!src) throw Error(ErrorKind::kDomain, "unknown source speaker \"" + p.source_speaker + "\"");
    if (!tgt) throw Error(ErrorKind::kDomain, "unknown target speaker \"" + p.target_speaker + "\"");
    const bool same_language = src->language == tgt->language;
    if (mode == VcMode::kMonolingual && !same_language) {
      throw Error(ErrorKind::kDomain, "monolingual pair " + p.source_speaker + " -> " +
                                          p.target_speaker + " crosses languages");
    }
    if (mode == VcMode::kCrosslingual && same_language) {
      throw Error(ErrorKind::kDomain, "crosslingual pair " + p.source_speaker + " -> " +
                                          p.target_speaker + " shares language " +
                                          std::string(to_string(src->language)));
    }
    targets_by_source[p.source_speaker];
  }
  for (auto& [source, list] : targets_by_source) list = selection.targets_of(source);

  AugmentationPlan plan;
  plan.seed = selection.seed;
  for (const auto& sp : sources.speakers) {
    const auto utterances = records_of(sources, sp.speaker_id);
    auto it = targets_by_source.find(sp.speaker_id);
    if (it == targets_by_source.end()) {
      for (const auto* r : utterances) {
        plan.excluded.push_back({r->utterance_id, "no target speakers selected for \"" +
                                                      sp.speaker_id + "\""});
      }
      continue;
    }
    for (const auto* r : utterances) {
      if (r->duration < options.min_duration) {
        plan.excluded.push_back({r->utterance_id, "shorter than minimum duration " +
                                                      fmt3(options.min_duration) + " s"});
      }
    }
    for (const std::string& target : it->second) {
      for (const auto* r : utterances) {
        if (r->duration < options.min_duration) continue;
        VcJob job;
        job.source_utterance_id = r->utterance_id;
        job.target_speaker_id = target;
        job.mode = mode;
        job.output_utterance_id = r->utterance_id + "__vc_" + target;
        job.output_speaker_id = sp.speaker_id + "__x__" + target;
        job.output_path = "audio/" + job.output_utterance_id + ".wav";
        job.source_duration = r->duration;
        plan.jobs.emplace_back(std::move(job));
      }
    }
  }
  plan.expected_added_hours = expected_hours(plan.jobs);
  return plan;
}

double standin_cents(double source_f0, double target_median_f0) {
  if (!(source_f0 > 0.0)) throw Error(ErrorKind::kDomain, "stand-in conversion needs a voiced source");
  if (!(target_median_f0 > 0.0)) throw Error(ErrorKind::kDomain, "stand-in conversion needs a voiced target");
  return std::clamp(1200.0 * std::log2(target_median_f0 / source_f0), -1200.0, 1200.0);
}

AudioBuffer standin_convert(const AudioBuffer& source, double source_f0,
                            double target_median_f0, const WsolaParams& params) {
  return pitch_shift(source, standin_cents(source_f0, target_median_f0), params);
}

ExecutionResult execute_plan(const AugmentationPlan& plan, ConversionBackend& backend,
                             const Corpus& sources, const Corpus* targets,
                             const ExecuteOptions& options) {
  namespace fs = std::filesystem;
  if (options.out_dir.empty()) throw Error(ErrorKind::kUsage, "execute_plan needs an output directory");
  const fs::path out_dir = fs::absolute(options.out_dir).lexically_normal();
  fs::create_directories(out_dir);

  std::unordered_map<std::string, const UtteranceRecord*> source_by_id;
  for (const auto& r : sources.records) source_by_id[r.utterance_id] = &r;
  std::unordered_map<std::string, std::vector<fs::path>> refs_by_target;

  std::vector<BackendJob> jobs;
  jobs.reserve(plan.jobs.size());
  for (const auto& job : plan.jobs) {
    auto it = source_by_id.find(source_utterance_of(job));
    if (it == source_by_id.end()) {
      throw Error(ErrorKind::kDomain, "plan references unknown utterance \"" +
                                          source_utterance_of(job) + "\"");
    }
    BackendJob bj;
    bj.source_wav = fs::absolute(sources.audio_file(*it->second)).lexically_normal();
    if (const auto* pj = std::get_if<PitchJob>(&job)) {
      bj.cents = pj->cents;
      bj.output_wav = out_dir / pj->output_path;
    } else {
      const auto& vj = std::get<VcJob>(job);
      if (!targets) throw Error(ErrorKind::kUsage, "VC plan executed without a target corpus");
      auto [rit, inserted] = refs_by_target.try_emplace(vj.target_speaker_id);
      if (inserted) {
        for (const auto& r : targets->records) {
          if (r.speaker_id == vj.target_speaker_id && !r.is_generated()) {
            rit->second.push_back(fs::absolute(targets->audio_file(r)).lexically_normal());
          }
        }
        if (rit->second.empty()) {
          throw Error(ErrorKind::kDomain, "target speaker \"" + vj.target_speaker_id +
                                              "\" has no reference recordings");
        }
      }
      bj.target_speaker = vj.target_speaker_id;
      bj.target_ref_wavs = rit->second;
      bj.output_wav = out_dir / vj.output_path;
    }
    jobs.push_back(std::move(bj));
  }

  // Batches are contiguous job ranges; each external batch gets its own dir.
  std::vector<std::pair<std::size_t, std::size_t>> batches;
  if (backend.batched()) {
    const std::size_t n_batches =
        std::max<std::size_t>(1, std::min<std::size_t>(options.workers, jobs.size()));
    for (std::size_t b = 0; b < n_batches && !jobs.empty(); ++b) {
      const std::size_t begin = jobs.size() * b / n_batches;
      const std::size_t end = jobs.size() * (b + 1) / n_batches;
      if (end > begin) batches.emplace_back(begin, end);
    }
  } else {
    for (std::size_t i = 0; i < jobs.size(); ++i) batches.emplace_back(i, i + 1);
  }

  std::vector<JobOutcome> outcomes(jobs.size());
  parallel_for(batches.size(), std::max(1u, options.workers), [&](std::size_t b) {
    const auto [begin, end] = batches[b];
    fs::path work_dir;
    if (backend.batched()) {
      char name[32];
      std::snprintf(name, sizeof(name), "batch_%04zu", b);
      work_dir = out_dir / "work" / name;
      fs::remove_all(work_dir);
      fs::create_directories(work_dir);
    }
    const auto result = backend.run_batch(
        std::span<const BackendJob>(jobs.data() + begin, end - begin), work_dir);
    if (result.size() != end - begin) {
      throw Error(ErrorKind::kBackend, backend.name() + " returned the wrong number of outcomes");
    }
    std::copy(result.begin(), result.end(), outcomes.begin() + static_cast<long>(begin));
  });

  ExecutionResult result;
  result.corpus = rebase(sources, out_dir);
  result.corpus.name = "augmented";
  std::vector<SpeakerProfile> known = sources.speakers;
  std::unordered_map<std::string, bool> generated_speaker_seen;

  for (std::size_t i = 0; i < plan.jobs.size(); ++i) {
    const auto& job = plan.jobs[i];
    if (!outcomes[i].ok) {
      result.failures.push_back({i, output_utterance_of(job), outcomes[i].message});
      continue;
    }
    const UtteranceRecord& src = *source_by_id.at(source_utterance_of(job));
    const SpeakerProfile* src_speaker = sources.find_speaker(src.speaker_id);
    UtteranceRecord rec;
    rec.transcript = src.transcript;
    rec.language = src.language;
    rec.style = src.style;
    rec.age_group = src.age_group;
    Provenance prov;
    prov.source_utterance_id = src.utterance_id;
    SpeakerProfile gen_profile;
    gen_profile.language = src.language;
    gen_profile.age_group = src.age_group;
    gen_profile.gender = src_speaker ? src_speaker->gender : Gender::kUnknown;

    if (const auto* pj = std::get_if<PitchJob>(&job)) {
      rec.utterance_id = pj->output_utterance_id;
      rec.speaker_id = pj->output_speaker_id;
      rec.audio_path = pj->output_path;
      rec.origin = Origin::kPitchShift;
      prov.params["cents"] = std::to_string(pj->cents);
    } else {
      const auto& vj = std::get<VcJob>(job);
      rec.utterance_id = vj.output_utterance_id;
      rec.speaker_id = vj.output_speaker_id;
      rec.audio_path = vj.output_path;
      rec.origin = vj.mode == VcMode::kMonolingual ? Origin::kVcMonolingual
                                                    : Origin::kVcCrosslingual;
      prov.params["target_speaker"] = vj.target_speaker_id;
      prov.params["mode"] = std::string(to_string(vj.mode));
      if (const SpeakerProfile* tgt = targets->find_speaker(vj.target_speaker_id)) {
        rec.age_group = tgt->age_group;
        gen_profile.age_group = tgt->age_group;
        gen_profile.gender = tgt->gender;
      }
    }
    const fs::path wav = out_dir / rec.audio_path;
    try {
      rec.duration = read_wav_info(wav).duration();
    } catch (const Error& e) {
      result.failures.push_back({i, rec.utterance_id, e.what()});
      continue;
    }
    rec.provenance = std::move(prov);
    if (!generated_speaker_seen[rec.speaker_id]) {
      generated_speaker_seen[rec.speaker_id] = true;
      gen_profile.speaker_id = rec.speaker_id;
      known.push_back(gen_profile);
    }
    result.corpus.records.push_back(std::move(rec));
    ++result.succeeded;
  }
  result.corpus.speakers = derive_profiles(result.corpus.records, known);
  result.realized_added_hours = total_hours(result.corpus) - total_hours(sources);
  return result;
}

std::string format_plan(const AugmentationPlan& plan) {
  json j;
  j["seed"] = plan.seed;
  j["expected_added_hours"] = plan.expected_added_hours;
  json jobs = json::array();
  for (const auto& job : plan.jobs) {
    json o;
    if (const auto* pj = std::get_if<PitchJob>(&job)) {
      o["kind"] = "pitch";
      o["source_utterance_id"] = pj->source_utterance_id;
      o["cents"] = pj->cents;
      o["output_utterance_id"] = pj->output_utterance_id;
      o["output_path"] = pj->output_path;
    } else {
      const auto& vj = std::get<VcJob>(job);
      o["kind"] = "vc";
      o["source_utterance_id"] = vj.source_utterance_id;
      o["target_speaker_id"] = vj.target_speaker_id;
      o["mode"] = std::string(to_string(vj.mode));
      o["output_utterance_id"] = vj.output_utterance_id;
      o["output_path"] = vj.output_path;
    }
    jobs.push_back(std::move(o));
  }
  j["jobs"] = std::move(jobs);
  json excluded = json::array();
  for (const auto& e : plan.excluded) {
    excluded.push_back({{"utterance_id", e.utterance_id}, {"reason", e.reason}});
  }
  j["excluded"] = std::move(excluded);
  return j.dump(2) + "\n";
}

}  // namespace cvaug
