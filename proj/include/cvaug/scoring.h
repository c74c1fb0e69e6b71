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

#ifndef CVAUG_SCORING_H_
#define CVAUG_SCORING_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvaug/corpus.h"

namespace cvaug {

/// Fixed normalization policy shared by references and hypotheses:
/// lowercase (ASCII and Latin-1 letters), punctuation removed, whitespace
/// split. Apostrophes and hyphens survive between word characters; a
/// word-initial apostrophe survives on one- or two-letter clitics ('s, 't).
std::vector<std::string> normalize_text(std::string_view raw);

enum class EditOp { kMatch, kSubstitution, kInsertion, kDeletion };

std::string_view to_string(EditOp op);

struct AlignedToken {
  EditOp op = EditOp::kMatch;
  std::string ref;  // empty for insertions
  std::string hyp;  // empty for deletions
};

struct EditCounts {
  std::size_t n_ref = 0;
  std::size_t n_sub = 0;
  std::size_t n_ins = 0;
  std::size_t n_del = 0;
  std::size_t n_match = 0;

  std::size_t errors() const { return n_sub + n_ins + n_del; }
  EditCounts& operator+=(const EditCounts& o);
};

struct Alignment {
  std::string utterance_id;
  std::vector<AlignedToken> ops;
  EditCounts counts;
};

/// Minimum edit-distance alignment with unit costs. The backtrace prefers
/// match, then substitution, then deletion, then insertion.
Alignment align(std::span<const std::string> ref, std::span<const std::string> hyp,
                std::string utterance_id = {});

struct ScoreRow {
  std::string name;
  EditCounts counts;
  double wer = 0.0;  // percent

  std::size_t n_ref_words() const { return counts.n_ref; }
  std::size_t n_errors() const { return counts.errors(); }
};

/// Corpus-level WER: errors and reference words are summed before dividing.
/// Throws Error(kDomain) when there are no reference words.
ScoreRow wer(std::span<const Alignment> alignments, std::string name = "all");

// Combines rows by summing their counts (pooled "Avg.").
ScoreRow pool_rows(std::span<const ScoreRow> rows, std::string name = "avg");

struct ScoreReport {
  std::vector<ScoreRow> sets;      // one row per style present (read, hmi, ...)
  ScoreRow pooled;                 // named "avg"
  std::vector<ScoreRow> speakers;  // per-speaker breakdown

  const ScoreRow* find_set(std::string_view name) const;
};

/// utterance_id -> raw hypothesis text.
using HypothesisMap = std::map<std::string, std::string, std::less<>>;

/// Lines "<utterance_id>\t<hypothesis text>"; duplicate ids are an error.
HypothesisMap parse_hypotheses(std::string_view text);
HypothesisMap load_hypotheses(const std::filesystem::path& path);
std::string format_hypotheses(const HypothesisMap& hyps);

// Normalized reference tokens of a manifest record.
std::vector<std::string> reference_tokens(const UtteranceRecord& record);

/// Aligns every record of `corpus` against its hypothesis, in record order.
/// Throws Error(kValidation) naming the first record without a hypothesis.
std::vector<Alignment> align_corpus(const Corpus& corpus, const HypothesisMap& hyps);

ScoreReport score_hypotheses(const Corpus& corpus, const HypothesisMap& hyps);
ScoreReport score_hypotheses(const Corpus& corpus, const std::filesystem::path& hyp_file);

std::string format_score_text(const ScoreReport& report);
std::string format_score_json(const ScoreReport& report);
ScoreReport parse_score_json(std::string_view text);

}  // namespace cvaug

#endif  // CVAUG_SCORING_H_
