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

#ifndef CVAUG_PAIRING_H_
#define CVAUG_PAIRING_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cvaug/corpus.h"
#include "cvaug/embeddings.h"

namespace cvaug {

enum class PairStrategy { kTop, kRandom, kLast };

std::string_view to_string(PairStrategy s);
PairStrategy parse_pair_strategy(std::string_view s);

struct ConversionPair {
  std::string source_speaker;
  std::string target_speaker;
  double similarity = 0.0;
  std::size_t rank = 0;  // 1-based within the source's list

  bool operator==(const ConversionPair&) const = default;
};

struct PairSelection {
  PairStrategy strategy = PairStrategy::kTop;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<ConversionPair> pairs;
  double mean_similarity = 0.0;

  // (source, target) pairs without rank/order.
  std::set<std::pair<std::string, std::string>> pair_set() const;
  // Targets chosen for one source, in rank order.
  std::vector<std::string> targets_of(std::string_view source) const;
};

/// Returns true when the (source, target) pair must not be selected.
using PairExclusion = std::function<bool(std::string_view source, std::string_view target)>;

/// Per-source selection of k targets. top = k most similar, last = k least
/// similar, random = k seeded uniform draws without replacement. Similarity
/// ties are broken by ascending target id. Random draws for a source use
/// derive_seed(seed, "pairs/" + source) so sources never perturb each other.
PairSelection select_pairs(const SimilarityMatrix& matrix, PairStrategy strategy,
                           std::size_t k, std::uint64_t seed,
                           const PairExclusion& exclusions = {});

/// Nested top-k selections for k = 2, 4, ..., max_folds.
std::vector<PairSelection> build_fold_plan(const SimilarityMatrix& matrix,
                                           std::size_t max_folds,
                                           const PairExclusion& exclusions = {});

using SpeakerDirectory = std::map<std::string, SpeakerProfile, std::less<>>;

// Speaker metadata from several corpora; later corpora do not override.
SpeakerDirectory make_speaker_directory(std::span<const Corpus* const> corpora);

PairExclusion no_exclusions();
PairExclusion exclude_self_pairs();
/// Same language, never the speaker itself.
PairExclusion monolingual_eligibility(SpeakerDirectory directory);
/// Target language differs from the source's and the target is a child.
PairExclusion crosslingual_eligibility(SpeakerDirectory directory);

/// Pair file: header line {"strategy", "k", "seed"} followed by one
/// {"source", "target", "similarity", "rank"} object per line.
std::string format_pair_file(const PairSelection& selection);
PairSelection parse_pair_file(std::string_view text);
PairSelection load_pair_file(const std::filesystem::path& path);
void write_pair_file(const std::filesystem::path& path, const PairSelection& selection);

}  // namespace cvaug

#endif  // CVAUG_PAIRING_H_
