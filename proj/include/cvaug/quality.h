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

#ifndef CVAUG_QUALITY_H_
#define CVAUG_QUALITY_H_

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvaug/corpus.h"
#include "cvaug/scoring.h"

namespace cvaug {

struct UtteranceScore {
  std::string utterance_id;
  double wer = 0.0;  // percent; 100 for errors against an empty reference
  std::size_t n_ref_words = 0;
  std::size_t n_errors = 0;
};

/// Recognizer used to judge generated speech.
class AsrBackend {
 public:
  virtual ~AsrBackend() = default;
  virtual std::string name() const = 0;
  /// Hypotheses for `records` (audio resolved against corpus.root).
  /// `work_dir` is private to this call.
  virtual HypothesisMap transcribe(const Corpus& corpus,
                                   std::span<const UtteranceRecord* const> records,
                                   const std::filesystem::path& work_dir) = 0;
};

/// Returns each reference transcript as the hypothesis.
class EchoAsrBackend : public AsrBackend {
 public:
  std::string name() const override { return "echo"; }
  HypothesisMap transcribe(const Corpus& corpus, std::span<const UtteranceRecord* const> records,
                           const std::filesystem::path& work_dir) override;
};

/// Replays fixed hypotheses (e.g. from a fixture file).
class ScriptedAsrBackend : public AsrBackend {
 public:
  explicit ScriptedAsrBackend(HypothesisMap hyps) : hyps_(std::move(hyps)) {}
  std::string name() const override { return "scripted"; }
  HypothesisMap transcribe(const Corpus& corpus, std::span<const UtteranceRecord* const> records,
                           const std::filesystem::path& work_dir) override;

 private:
  HypothesisMap hyps_;
};

/// External recognizer. The toolkit writes <work_dir>/asr_manifest.jsonl
/// ({"utterance_id", "audio_path"} per line, absolute paths), runs
/// `<command> <asr_manifest.jsonl> <hypotheses.txt>` inside work_dir and
/// reads the hypothesis file back (scoring-module format).
class ExternalAsrBackend : public AsrBackend {
 public:
  explicit ExternalAsrBackend(std::string command) : command_(std::move(command)) {}
  std::string name() const override { return "external"; }
  HypothesisMap transcribe(const Corpus& corpus, std::span<const UtteranceRecord* const> records,
                           const std::filesystem::path& work_dir) override;

 private:
  std::string command_;
};

/// "echo", "scripted:<hypothesis file>", or an external command line.
std::unique_ptr<AsrBackend> make_asr_backend(std::string_view spec);

/// Scores every generated record (origin != original) against its inherited
/// transcript. When `hypotheses_out` is given the raw hypotheses are copied
/// there. Throws Error(kValidation) for a missing hypothesis.
std::vector<UtteranceScore> score_generated(const Corpus& generated, AsrBackend& backend,
                                            const std::filesystem::path& work_dir,
                                            HypothesisMap* hypotheses_out = nullptr);

enum class QualityMode { kUtteranceThreshold, kSpeakerPercentile };

std::string_view to_string(QualityMode m);
QualityMode parse_quality_mode(std::string_view s);

struct QualityLevel {
  QualityMode mode = QualityMode::kUtteranceThreshold;
  int level = 100;  // percent, multiple of 10 in [0, 100]

  void check() const;
};

/// Keeps original records untouched and filters generated ones:
///  - utterance_threshold: keep utterances with wer <= level;
///  - speaker_percentile: rank generated speakers by duration-weighted mean
///    utterance WER (ties by id) and keep the best
///    ceil(level% of speakers).
/// Level 100 returns the corpus unchanged. Every generated record needs a
/// score.
Corpus filter_by_level(std::span<const UtteranceScore> scores, const Corpus& corpus,
                       const QualityLevel& level);

std::string format_scores(std::span<const UtteranceScore> scores);
std::vector<UtteranceScore> parse_scores(std::string_view text);

}  // namespace cvaug

#endif  // CVAUG_QUALITY_H_
