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

#include "cvaug/embeddings.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "cvaug/dsp.h"
#include "cvaug/error.h"
#include "cvaug/io.h"
#include "json.hpp"

namespace cvaug {

using nlohmann::json;

void check_embedding(const Embedding& e) {
  if (e.vector.empty()) throw Error(ErrorKind::kDomain, "embedding of \"" + e.speaker_id + "\" is empty");
  double norm2 = 0.0;
  for (double v : e.vector) {
    if (!std::isfinite(v))
      throw Error(ErrorKind::kDomain, "embedding of \"" + e.speaker_id + "\" has non-finite components");
    norm2 += v * v;
  }
  if (!(norm2 > 0.0))
    throw Error(ErrorKind::kDomain, "embedding of \"" + e.speaker_id + "\" has zero norm");
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
  if (a.vector.size() != b.vector.size()) {
    throw Error(ErrorKind::kDomain,
                "embedding dimension mismatch: " + std::to_string(a.vector.size()) +
                    " vs " + std::to_string(b.vector.size()));
  }
  double dot = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.vector.size(); ++i) {
    dot += a.vector[i] * b.vector[i];
    aa += a.vector[i] * a.vector[i];
    bb += b.vector[i] * b.vector[i];
  }
  if (!(aa > 0.0) || !(bb > 0.0)) {
    throw Error(ErrorKind::kDomain, "cosine similarity with a zero-norm embedding");
  }
  return std::clamp(dot / (std::sqrt(aa) * std::sqrt(bb)), -1.0, 1.0);
}

std::size_t acoustic_summary_dim(const AcousticSummaryOptions& options) {
  return 2 * options.n_mels + 2;
}

Embedding acoustic_summary_embedding(std::string speaker_id,
                                     std::span<const AudioBuffer> utterances,
                                     const AcousticSummaryOptions& options) {
  const std::size_t n_mels = options.n_mels;
  std::vector<long double> sum(n_mels, 0.0L), sum_sq(n_mels, 0.0L);
  std::size_t feature_frames = 0;
  std::vector<double> voiced;
  std::size_t f0_frames = 0;
  const double silent = std::log(kLogFloor) + 1e-9;

  for (const AudioBuffer& audio : utterances) {
    const std::size_t mel_len =
        static_cast<std::size_t>(std::llround(options.mel_frame * audio.sample_rate));
    if (audio.size() >= mel_len && mel_len > 0) {
      const FeatureMatrix mel = mel_spectrogram(audio, n_mels, options.mel_frame, options.mel_hop);
      for (std::size_t f = 0; f < mel.rows; ++f) {
        bool any = false;
        for (std::size_t m = 0; m < n_mels; ++m) any = any || mel(f, m) > silent;
        if (!any) continue;
        ++feature_frames;
        for (std::size_t m = 0; m < n_mels; ++m) {
          sum[m] += mel(f, m);
          sum_sq[m] += static_cast<long double>(mel(f, m)) * mel(f, m);
        }
      }
    }
    const std::size_t f0_len =
        static_cast<std::size_t>(std::llround(options.f0_frame * audio.sample_rate));
    if (audio.size() >= f0_len) {
      const F0Track track = estimate_f0(audio, options.f0_frame, options.f0_hop);
      f0_frames += track.values.size();
      const auto v = track.voiced_values();
      voiced.insert(voiced.end(), v.begin(), v.end());
    }
  }

  if (voiced.empty() && feature_frames < options.min_feature_frames) {
    throw Error(ErrorKind::kDomain,
                "speaker \"" + speaker_id + "\": no usable frames for an acoustic embedding");
  }

  Embedding e;
  e.speaker_id = std::move(speaker_id);
  e.source = EmbeddingSource::kAcousticSummary;
  e.vector.resize(acoustic_summary_dim(options), 0.0);
  if (feature_frames > 0) {
    const auto n = static_cast<long double>(feature_frames);
    for (std::size_t m = 0; m < n_mels; ++m) {
      const long double mean = sum[m] / n;
      const long double var = std::max(0.0L, sum_sq[m] / n - mean * mean);
      e.vector[m] = static_cast<double>(mean);
      e.vector[n_mels + m] = static_cast<double>(std::sqrt(var));
    }
  }
  if (!voiced.empty()) e.vector[2 * n_mels] = median(voiced) / options.f0_scale;
  if (f0_frames > 0) {
    e.vector[2 * n_mels + 1] =
        static_cast<double>(voiced.size()) / static_cast<double>(f0_frames);
  }
  return e;
}

std::size_t SimilarityMatrix::source_index(std::string_view id) const {
  auto it = std::find(source_ids.begin(), source_ids.end(), id);
  if (it == source_ids.end())
    throw Error(ErrorKind::kDomain, "speaker \"" + std::string(id) + "\" not a matrix source");
  return static_cast<std::size_t>(it - source_ids.begin());
}

std::size_t SimilarityMatrix::target_index(std::string_view id) const {
  auto it = std::find(target_ids.begin(), target_ids.end(), id);
  if (it == target_ids.end())
    throw Error(ErrorKind::kDomain, "speaker \"" + std::string(id) + "\" not a matrix target");
  return static_cast<std::size_t>(it - target_ids.begin());
}

SimilarityMatrix build_similarity_matrix(std::span<const Embedding> sources,
                                         std::span<const Embedding> targets) {
  SimilarityMatrix m;
  for (const auto& s : sources) {
    check_embedding(s);
    m.source_ids.push_back(s.speaker_id);
  }
  for (const auto& t : targets) {
    check_embedding(t);
    m.target_ids.push_back(t.speaker_id);
  }
  m.values.reserve(sources.size() * targets.size());
  for (const auto& s : sources) {
    for (const auto& t : targets) m.values.push_back(cosine_similarity(s, t));
  }
  return m;
}

std::vector<Embedding> parse_embeddings(std::string_view text, EmbeddingSource source) {
  std::vector<Embedding> out;
  std::unordered_set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      Embedding e;
      e.speaker_id = j.at("speaker_id").get<std::string>();
      e.vector = j.at("vector").get<std::vector<double>>();
      e.source = source;
      if (!seen.insert(e.speaker_id).second) {
        throw Error(ErrorKind::kValidation, "duplicate speaker \"" + e.speaker_id + "\"");
      }
      if (!out.empty() && out.front().vector.size() != e.vector.size()) {
        throw Error(ErrorKind::kValidation, "inconsistent embedding dimension");
      }
      check_embedding(e);
      out.push_back(std::move(e));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kParse, "embeddings line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.kind(), "embeddings line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Embedding> load_embeddings(const std::filesystem::path& path) {
  return parse_embeddings(read_text_file(path));
}

std::string format_embeddings(std::span<const Embedding> embeddings) {
  std::string out;
  for (const auto& e : embeddings) {
    json j;
    j["speaker_id"] = e.speaker_id;
    j["vector"] = e.vector;
    out += j.dump() + "\n";
  }
  return out;
}

void write_embeddings(const std::filesystem::path& path, std::span<const Embedding> embeddings) {
  write_text_file(path, format_embeddings(embeddings));
}

std::string format_similarity_matrix(const SimilarityMatrix& m) {
  json j;
  j["source_ids"] = m.source_ids;
  j["target_ids"] = m.target_ids;
  json rows = json::array();
  for (std::size_t i = 0; i < m.source_ids.size(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.target_ids.size(); ++k) row.push_back(m.at(i, k));
    rows.push_back(std::move(row));
  }
  j["values"] = std::move(rows);
  return j.dump(2) + "\n";
}

SimilarityMatrix parse_similarity_matrix(std::string_view text) {
  try {
    const json j = json::parse(text);
    SimilarityMatrix m;
    m.source_ids = j.at("source_ids").get<std::vector<std::string>>();
    m.target_ids = j.at("target_ids").get<std::vector<std::string>>();
    const auto& rows = j.at("values");
    if (rows.size() != m.source_ids.size())
      throw Error(ErrorKind::kParse, "similarity matrix row count mismatch");
    for (const auto& row : rows) {
      if (row.size() != m.target_ids.size())
        throw Error(ErrorKind::kParse, "similarity matrix column count mismatch");
      for (const auto& v : row) {
        const double x = v.get<double>();
        if (!(x >= -1.0 && x <= 1.0))
          throw Error(ErrorKind::kParse, "similarity value outside [-1, 1]");
        m.values.push_back(x);
      }
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("similarity matrix: ") + e.what());
  }
}

SimilarityMatrix load_similarity_matrix(const std::filesystem::path& path) {
  return parse_similarity_matrix(read_text_file(path));
}

void write_similarity_matrix(const std::filesystem::path& path, const SimilarityMatrix& m) {
  write_text_file(path, format_similarity_matrix(m));
}

}  // namespace cvaug
