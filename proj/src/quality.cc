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

#include "cvaug/quality.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "cvaug/error.h"
#include "cvaug/io.h"
#include "cvaug/process.h"
#include "json.hpp"

namespace cvaug {

namespace fs = std::filesystem;
using nlohmann::json;

HypothesisMap EchoAsrBackend::transcribe(const Corpus&,
                                         std::span<const UtteranceRecord* const> records,
                                         const fs::path&) {
  HypothesisMap out;
  for (const auto* r : records) {
    std::string text;
    for (const auto& w : r->transcript) {
      if (!text.empty()) text += ' ';
      text += w;
    }
    out[r->utterance_id] = std::move(text);
  }
  return out;
}

HypothesisMap ScriptedAsrBackend::transcribe(const Corpus&,
                                             std::span<const UtteranceRecord* const> records,
                                             const fs::path&) {
  HypothesisMap out;
  for (const auto* r : records) {
    if (auto it = hyps_.find(r->utterance_id); it != hyps_.end()) out.insert(*it);
  }
  return out;
}

HypothesisMap ExternalAsrBackend::transcribe(const Corpus& corpus,
                                             std::span<const UtteranceRecord* const> records,
                                             const fs::path& work_dir) {
  fs::create_directories(work_dir);
  std::string manifest;
  for (const auto* r : records) {
    json j;
    j["utterance_id"] = r->utterance_id;
    j["audio_path"] = fs::absolute(corpus.audio_file(*r)).lexically_normal().string();
    manifest += j.dump() + "\n";
  }
  const fs::path manifest_path = work_dir / "asr_manifest.jsonl";
  const fs::path hyp_path = work_dir / "hypotheses.txt";
  write_text_file(manifest_path, manifest);
  fs::remove(hyp_path);
  const int code = run_command(command_, {manifest_path.string(), hyp_path.string()}, work_dir);
  if (code != 0) {
    throw Error(ErrorKind::kBackend, "ASR backend exited with code " + std::to_string(code));
  }
  if (!fs::exists(hyp_path)) {
    throw Error(ErrorKind::kBackend, "ASR backend wrote no hypothesis file");
  }
  return load_hypotheses(hyp_path);
}

std::unique_ptr<AsrBackend> make_asr_backend(std::string_view spec) {
  if (spec == "echo") return std::make_unique<EchoAsrBackend>();
  if (spec.starts_with("scripted:")) {
    return std::make_unique<ScriptedAsrBackend>(load_hypotheses(std::string(spec.substr(9))));
  }
  if (spec.empty()) throw Error(ErrorKind::kUsage, "no ASR backend configured");
  return std::make_unique<ExternalAsrBackend>(std::string(spec));
}

std::vector<UtteranceScore> score_generated(const Corpus& generated, AsrBackend& backend,
                                            const fs::path& work_dir,
                                            HypothesisMap* hypotheses_out) {
  std::vector<const UtteranceRecord*> records;
  for (const auto& r : generated.records) {
    if (r.is_generated()) records.push_back(&r);
  }
  const HypothesisMap hyps = backend.transcribe(generated, records, work_dir);
  std::vector<UtteranceScore> scores;
  scores.reserve(records.size());
  for (const auto* r : records) {
    auto it = hyps.find(r->utterance_id);
    if (it == hyps.end()) {
      throw Error(ErrorKind::kValidation, backend.name() + " backend returned no hypothesis for \"" +
                                              r->utterance_id + "\"");
    }
    const Alignment a = align(reference_tokens(*r), normalize_text(it->second), r->utterance_id);
    UtteranceScore s;
    s.utterance_id = r->utterance_id;
    s.n_ref_words = a.counts.n_ref;
    s.n_errors = a.counts.errors();
    if (s.n_ref_words > 0) {
      s.wer = 100.0 * static_cast<double>(s.n_errors) / static_cast<double>(s.n_ref_words);
    } else {
      s.wer = s.n_errors > 0 ? 100.0 : 0.0;
    }
    scores.push_back(std::move(s));
    if (hypotheses_out) (*hypotheses_out)[r->utterance_id] = it->second;
  }
  return scores;
}

std::string_view to_string(QualityMode m) {
  return m == QualityMode::kUtteranceThreshold ? "utterance_threshold" : "speaker_percentile";
}

QualityMode parse_quality_mode(std::string_view s) {
  if (s == "utterance_threshold" || s == "utterance") return QualityMode::kUtteranceThreshold;
  if (s == "speaker_percentile" || s == "speaker") return QualityMode::kSpeakerPercentile;
  throw Error(ErrorKind::kParse, "unknown quality mode \"" + std::string(s) + "\"");
}

void QualityLevel::check() const {
  if (level < 0 || level > 100 || level % 10 != 0) {
    throw Error(ErrorKind::kDomain,
                "quality level must be a multiple of 10 in [0, 100], got " + std::to_string(level));
  }
}

Corpus filter_by_level(std::span<const UtteranceScore> scores, const Corpus& corpus,
                       const QualityLevel& level) {
  level.check();
  std::unordered_map<std::string, const UtteranceScore*> by_id;
  for (const auto& s : scores) by_id[s.utterance_id] = &s;
  for (const auto& r : corpus.records) {
    if (r.is_generated() && !by_id.count(r.utterance_id)) {
      throw Error(ErrorKind::kValidation, "no quality score for generated utterance \"" +
                                              r.utterance_id + "\"");
    }
  }
  if (level.level == 100) return corpus;

  std::unordered_map<std::string, bool> keep_speaker;
  if (level.mode == QualityMode::kSpeakerPercentile) {
    // Duration-weighted mean utterance WER per generated speaker.
    struct Weighted {
      double weighted_wer = 0.0;
      double seconds = 0.0;
      double plain_wer = 0.0;
      std::size_t n = 0;
    };
    std::vector<std::string> order;
    std::unordered_map<std::string, Weighted> pooled;
    for (const auto& r : corpus.records) {
      if (!r.is_generated()) continue;
      auto [it, inserted] = pooled.try_emplace(r.speaker_id);
      if (inserted) order.push_back(r.speaker_id);
      const double wer = by_id[r.utterance_id]->wer;
      it->second.weighted_wer += r.duration * wer;
      it->second.seconds += r.duration;
      it->second.plain_wer += wer;
      ++it->second.n;
    }
    auto rate = [&](const std::string& spk) {
      const Weighted& w = pooled[spk];
      // Zero-length speakers fall back to the unweighted mean.
      if (w.seconds <= 0.0) return w.plain_wer / static_cast<double>(w.n);
      return w.weighted_wer / w.seconds;
    };
    std::sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
      const double ra = rate(a), rb = rate(b);
      if (ra != rb) return ra < rb;
      return a < b;
    });
    const std::size_t keep =
        (order.size() * static_cast<std::size_t>(level.level) + 99) / 100;
    for (std::size_t i = 0; i < keep && i < order.size(); ++i) keep_speaker[order[i]] = true;
  }

  Corpus out;
  out.name = corpus.name;
  out.root = corpus.root;
  for (const auto& r : corpus.records) {
    bool keep = true;
    if (r.is_generated()) {
      if (level.mode == QualityMode::kUtteranceThreshold) {
        keep = by_id[r.utterance_id]->wer <= static_cast<double>(level.level);
      } else {
        keep = keep_speaker.count(r.speaker_id) > 0;
      }
    }
    if (keep) out.records.push_back(r);
  }
  out.speakers = derive_profiles(out.records, corpus.speakers);
  return out;
}

std::string format_scores(std::span<const UtteranceScore> scores) {
  std::string out;
  for (const auto& s : scores) {
    json j;
    j["utterance_id"] = s.utterance_id;
    j["wer"] = s.wer;
    j["n_ref_words"] = s.n_ref_words;
    j["n_errors"] = s.n_errors;
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<UtteranceScore> parse_scores(std::string_view text) {
  std::vector<UtteranceScore> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      UtteranceScore s;
      s.utterance_id = j.at("utterance_id").get<std::string>();
      s.wer = j.at("wer").get<double>();
      s.n_ref_words = j.at("n_ref_words").get<std::size_t>();
      s.n_errors = j.at("n_errors").get<std::size_t>();
      out.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kParse, "score line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace cvaug
