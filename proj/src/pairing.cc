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

#include "cvaug/pairing.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "cvaug/error.h"
#include "cvaug/io.h"
#include "cvaug/rng.h"
#include "json.hpp"

namespace cvaug {

using nlohmann::json;

namespace {

// Summed in ascending order so equal pair sets give bit-identical means
// whatever order they were selected in.
double mean_similarity_of(const std::vector<ConversionPair>& pairs) {
  std::vector<double> values;
  values.reserve(pairs.size());
  for (const auto& p : pairs) values.push_back(p.similarity);
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

std::string_view to_string(PairStrategy s) {
  switch (s) {
    case PairStrategy::kTop: return "top";
    case PairStrategy::kRandom: return "random";
    case PairStrategy::kLast: return "last";
  }
  return "?";
}

PairStrategy parse_pair_strategy(std::string_view s) {
  if (s == "top") return PairStrategy::kTop;
  if (s == "random") return PairStrategy::kRandom;
  if (s == "last") return PairStrategy::kLast;
  throw Error(ErrorKind::kParse, "unknown pair strategy \"" + std::string(s) + "\"");
}

std::set<std::pair<std::string, std::string>> PairSelection::pair_set() const {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& p : pairs) out.emplace(p.source_speaker, p.target_speaker);
  return out;
}

std::vector<std::string> PairSelection::targets_of(std::string_view source) const {
  std::vector<const ConversionPair*> mine;
  for (const auto& p : pairs) {
    if (p.source_speaker == source) mine.push_back(&p);
  }
  std::sort(mine.begin(), mine.end(),
            [](const auto* a, const auto* b) { return a->rank < b->rank; });
  std::vector<std::string> out;
  for (const auto* p : mine) out.push_back(p->target_speaker);
  return out;
}

PairSelection select_pairs(const SimilarityMatrix& matrix, PairStrategy strategy,
                           std::size_t k, std::uint64_t seed,
                           const PairExclusion& exclusions) {
  if (matrix.target_ids.empty()) throw Error(ErrorKind::kDomain, "empty target speaker set");
  if (k == 0) throw Error(ErrorKind::kDomain, "k must be at least 1");

  PairSelection sel;
  sel.strategy = strategy;
  sel.k = k;
  sel.seed = seed;
  for (std::size_t s = 0; s < matrix.source_ids.size(); ++s) {
    const std::string& source = matrix.source_ids[s];
    std::vector<std::size_t> eligible;
    for (std::size_t t = 0; t < matrix.target_ids.size(); ++t) {
      if (!exclusions || !exclusions(source, matrix.target_ids[t])) eligible.push_back(t);
    }
    if (k > eligible.size()) {
      throw Error(ErrorKind::kDomain,
                  "source \"" + source + "\" has " + std::to_string(eligible.size()) +
                      " eligible targets, cannot select " + std::to_string(k));
    }
    std::sort(eligible.begin(), eligible.end(), [&](std::size_t a, std::size_t b) {
      return matrix.target_ids[a] < matrix.target_ids[b];
    });

    std::vector<std::size_t> chosen;
    switch (strategy) {
      case PairStrategy::kTop:
      case PairStrategy::kLast: {
        const bool descending = strategy == PairStrategy::kTop;
        std::stable_sort(eligible.begin(), eligible.end(), [&](std::size_t a, std::size_t b) {
          return descending ? matrix.at(s, a) > matrix.at(s, b) : matrix.at(s, a) < matrix.at(s, b);
        });
        chosen.assign(eligible.begin(), eligible.begin() + static_cast<long>(k));
        break;
      }
      case PairStrategy::kRandom: {
        std::mt19937_64 gen(derive_seed(seed, "pairs/" + source));
        for (std::size_t i : sample_without_replacement(gen, eligible.size(), k)) {
          chosen.push_back(eligible[i]);
        }
        break;
      }
    }
    for (std::size_t r = 0; r < chosen.size(); ++r) {
      sel.pairs.push_back({source, matrix.target_ids[chosen[r]], matrix.at(s, chosen[r]), r + 1});
    }
  }
  if (!sel.pairs.empty()) {
    sel.mean_similarity = mean_similarity_of(sel.pairs);
  }
  return sel;
}

std::vector<PairSelection> build_fold_plan(const SimilarityMatrix& matrix,
                                           std::size_t max_folds,
                                           const PairExclusion& exclusions) {
  if (max_folds < 2 || max_folds % 2 != 0) {
    throw Error(ErrorKind::kDomain, "fold count must be an even number >= 2");
  }
  std::vector<PairSelection> plan;
  for (std::size_t k = 2; k <= max_folds; k += 2) {
    try {
      plan.push_back(select_pairs(matrix, PairStrategy::kTop, k, 0, exclusions));
    } catch (const Error& e) {
      throw Error(e.kind(), "insufficient targets for " + std::to_string(k) +
                                "-fold plan: " + e.what());
    }
  }
  return plan;
}

SpeakerDirectory make_speaker_directory(std::span<const Corpus* const> corpora) {
  SpeakerDirectory dir;
  for (const Corpus* c : corpora) {
    for (const auto& p : c->speakers) dir.try_emplace(p.speaker_id, p);
  }
  return dir;
}

namespace {

const SpeakerProfile& lookup(const SpeakerDirectory& dir, std::string_view id) {
  auto it = dir.find(id);
  if (it == dir.end())
    throw Error(ErrorKind::kDomain, "unknown speaker \"" + std::string(id) + "\"");
  return it->second;
}

}  // namespace

PairExclusion no_exclusions() { return {}; }

PairExclusion exclude_self_pairs() {
  return [](std::string_view s, std::string_view t) { return s == t; };
}

PairExclusion monolingual_eligibility(SpeakerDirectory directory) {
  return [dir = std::move(directory)](std::string_view s, std::string_view t) {
    if (s == t) return true;
    return lookup(dir, s).language != lookup(dir, t).language;
  };
}

PairExclusion crosslingual_eligibility(SpeakerDirectory directory) {
  return [dir = std::move(directory)](std::string_view s, std::string_view t) {
    const auto& src = lookup(dir, s);
    const auto& tgt = lookup(dir, t);
    return src.language == tgt.language || tgt.age_group != AgeGroup::kChild;
  };
}

std::string format_pair_file(const PairSelection& selection) {
  json header;
  header["strategy"] = std::string(to_string(selection.strategy));
  header["k"] = selection.k;
  header["seed"] = selection.seed;
  std::string out = header.dump() + "\n";
  for (const auto& p : selection.pairs) {
    json j;
    j["source"] = p.source_speaker;
    j["target"] = p.target_speaker;
    j["similarity"] = p.similarity;
    j["rank"] = p.rank;
    out += j.dump() + "\n";
  }
  return out;
}

PairSelection parse_pair_file(std::string_view text) {
  PairSelection sel;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const json j = json::parse(line);
      if (!have_header) {
        sel.strategy = parse_pair_strategy(j.at("strategy").get<std::string>());
        sel.k = j.at("k").get<std::size_t>();
        sel.seed = j.at("seed").get<std::uint64_t>();
        have_header = true;
        continue;
      }
      ConversionPair p;
      p.source_speaker = j.at("source").get<std::string>();
      p.target_speaker = j.at("target").get<std::string>();
      p.similarity = j.at("similarity").get<double>();
      p.rank = j.at("rank").get<std::size_t>();
      sel.pairs.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, "pair file line " + std::to_string(line_no) + ": " + e.what());
  }
  if (!have_header) throw Error(ErrorKind::kParse, "pair file has no header line");
  if (!sel.pairs.empty()) {
    sel.mean_similarity = mean_similarity_of(sel.pairs);
  }
  return sel;
}

PairSelection load_pair_file(const std::filesystem::path& path) {
  return parse_pair_file(read_text_file(path));
}

void write_pair_file(const std::filesystem::path& path, const PairSelection& selection) {
  write_text_file(path, format_pair_file(selection));
}

}  // namespace cvaug
