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

#ifndef CVAUG_CORPUS_H_
#define CVAUG_CORPUS_H_

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace cvaug {

enum class Language { kNl, kDe, kEn };
enum class AgeGroup { kChild, kTeen, kAdult };
enum class Style { kRead, kHmi, kSpontaneous };
enum class Origin { kOriginal, kPitchShift, kVcMonolingual, kVcCrosslingual };
enum class Gender { kMale, kFemale, kUnknown };

std::string_view to_string(Language v);
std::string_view to_string(AgeGroup v);
std::string_view to_string(Style v);
std::string_view to_string(Origin v);
std::string_view to_string(Gender v);

// Parsers throw Error(kParse) on unknown names.
Language parse_language(std::string_view s);
AgeGroup parse_age_group(std::string_view s);
Style parse_style(std::string_view s);
Origin parse_origin(std::string_view s);
Gender parse_gender(std::string_view s);

/// Where a generated utterance came from. `params` holds the generator's
/// settings (e.g. {"cents": "250"} or {"target_speaker": "de_k03"}).
struct Provenance {
  std::string source_utterance_id;
  std::map<std::string, std::string> params;

  bool operator==(const Provenance&) const = default;
};

struct UtteranceRecord {
  std::string utterance_id;
  std::string speaker_id;
  std::string audio_path;  // relative to Corpus::root
  std::vector<std::string> transcript;
  double duration = 0.0;  // seconds
  Language language = Language::kNl;
  AgeGroup age_group = AgeGroup::kChild;
  Style style = Style::kRead;
  Origin origin = Origin::kOriginal;
  std::optional<Provenance> provenance;

  bool is_generated() const { return origin != Origin::kOriginal; }
  bool operator==(const UtteranceRecord&) const = default;
};

struct SpeakerProfile {
  std::string speaker_id;
  Language language = Language::kNl;
  AgeGroup age_group = AgeGroup::kChild;
  Gender gender = Gender::kUnknown;
  std::vector<std::string> utterance_ids;
  double total_duration = 0.0;  // seconds

  bool operator==(const SpeakerProfile&) const = default;
};

/// A manifest in memory. Treated as an immutable value once loaded; the
/// operations below return new corpora.
struct Corpus {
  std::string name;
  std::filesystem::path root;  // directory audio paths are relative to
  std::vector<UtteranceRecord> records;
  std::vector<SpeakerProfile> speakers;

  const UtteranceRecord* find_record(std::string_view utterance_id) const;
  const SpeakerProfile* find_speaker(std::string_view speaker_id) const;
  std::filesystem::path audio_file(const UtteranceRecord& record) const {
    return root / record.audio_path;
  }

  bool operator==(const Corpus&) const = default;
};

struct Violation {
  std::string subject;  // utterance or speaker id the problem is attached to
  std::string message;
};

struct ValidateOptions {
  // Cross-check durations and formats against the WAV headers.
  bool check_audio = true;
  int expected_rate = 16000;
  double duration_tolerance = 0.01;  // seconds
  double profile_tolerance = 1e-6;   // seconds per utterance of the speaker
};

/// Parses a JSONL manifest. Lines carrying a "speaker_profile" object declare
/// speakers; every other non-blank line is an utterance record. When no
/// profiles are declared they are synthesized from the records.
Corpus load_manifest(const std::filesystem::path& path);

// Same as load_manifest but from in-memory text; `root` anchors audio paths.
Corpus parse_manifest(std::string_view text, std::string name,
                      std::filesystem::path root);

/// Canonical manifest text: profile lines first, then records, fixed key
/// order, durations with six decimals.
std::string format_manifest(const Corpus& corpus);
void write_manifest(const std::filesystem::path& path, const Corpus& corpus);

/// Every invariant violation found in `corpus`. Never throws for bad data.
std::vector<Violation> validate(const Corpus& corpus,
                                const ValidateOptions& options = {});

/// Speaker profiles derived from the records (first-appearance order).
/// Gender is taken from `known` when a profile with the same id exists there.
std::vector<SpeakerProfile> derive_profiles(
    const std::vector<UtteranceRecord>& records,
    const std::vector<SpeakerProfile>& known = {});

/// Conjunction of optional clauses; an empty clause set matches everything.
struct CorpusFilter {
  std::set<Language> languages;
  std::set<AgeGroup> age_groups;
  std::set<Style> styles;
  std::set<Origin> origins;
  std::function<bool(const UtteranceRecord&)> predicate;

  bool matches(const UtteranceRecord& r) const;
};

Corpus subset(const Corpus& corpus, const CorpusFilter& filter);

/// Union of two corpora. Audio paths of `b` are re-anchored to a's root.
/// Throws Error(kValidation) when an utterance id appears in both.
Corpus merge(const Corpus& a, const Corpus& b);

/// Re-anchors every audio path to `new_root`.
Corpus rebase(const Corpus& corpus, const std::filesystem::path& new_root);

double total_seconds(const Corpus& corpus);
double total_hours(const Corpus& corpus);

struct CorpusStats {
  std::size_t utterances = 0;
  std::size_t speakers = 0;
  double hours = 0.0;
  std::map<std::string, double> hours_by_style;
  std::map<std::string, double> hours_by_age_group;
  std::map<std::string, double> hours_by_origin;
  std::map<std::string, std::size_t> speakers_by_age_group;
};

CorpusStats compute_stats(const Corpus& corpus);

}  // namespace cvaug

#endif  // CVAUG_CORPUS_H_
