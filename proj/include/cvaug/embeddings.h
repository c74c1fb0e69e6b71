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

#ifndef CVAUG_EMBEDDINGS_H_
#define CVAUG_EMBEDDINGS_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvaug/audio.h"

namespace cvaug {

enum class EmbeddingSource { kImported, kAcousticSummary };

struct Embedding {
  std::string speaker_id;
  std::vector<double> vector;
  EmbeddingSource source = EmbeddingSource::kImported;
};

/// Throws Error(kDomain) for empty, non-finite or zero-norm vectors.
void check_embedding(const Embedding& e);

/// dot(a, b) / (|a| |b|), clamped to [-1, 1]. Dimensions must agree and both
/// norms must be positive.
double cosine_similarity(const Embedding& a, const Embedding& b);

struct AcousticSummaryOptions {
  std::size_t n_mels = 24;
  double mel_frame = 0.025;
  double mel_hop = 0.010;
  double f0_frame = 0.04;
  double f0_hop = 0.01;
  double f0_scale = 500.0;  // median F0 is divided by this
  std::size_t min_feature_frames = 10;
};

/// Size of the vector produced by acoustic_summary_embedding.
std::size_t acoustic_summary_dim(const AcousticSummaryOptions& options = {});

/// Hermetic speaker embedding pooled over all of a speaker's utterances:
/// [mean log-mel per bin, std log-mel per bin, median F0 / 500, voiced
/// fraction]. Silent frames do not contribute to the mel statistics.
/// Throws Error(kDomain) when no utterance yields a usable frame.
Embedding acoustic_summary_embedding(std::string speaker_id,
                                     std::span<const AudioBuffer> utterances,
                                     const AcousticSummaryOptions& options = {});

struct SimilarityMatrix {
  std::vector<std::string> source_ids;
  std::vector<std::string> target_ids;
  std::vector<double> values;  // row-major, sources x targets

  double at(std::size_t source, std::size_t target) const {
    return values[source * target_ids.size() + target];
  }
  std::size_t source_index(std::string_view id) const;  // throws if absent
  std::size_t target_index(std::string_view id) const;
};

SimilarityMatrix build_similarity_matrix(std::span<const Embedding> sources,
                                         std::span<const Embedding> targets);

// JSONL, one {"speaker_id": ..., "vector": [...]} per line.
std::vector<Embedding> parse_embeddings(std::string_view text,
                                        EmbeddingSource source = EmbeddingSource::kImported);
std::vector<Embedding> load_embeddings(const std::filesystem::path& path);
std::string format_embeddings(std::span<const Embedding> embeddings);
void write_embeddings(const std::filesystem::path& path,
                      std::span<const Embedding> embeddings);

// {"source_ids": [...], "target_ids": [...], "values": [[...], ...]}
std::string format_similarity_matrix(const SimilarityMatrix& m);
SimilarityMatrix parse_similarity_matrix(std::string_view text);
SimilarityMatrix load_similarity_matrix(const std::filesystem::path& path);
void write_similarity_matrix(const std::filesystem::path& path, const SimilarityMatrix& m);

}  // namespace cvaug

#endif  // CVAUG_EMBEDDINGS_H_
