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

#ifndef CVAUG_SIGNIFICANCE_H_
#define CVAUG_SIGNIFICANCE_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvaug/corpus.h"
#include "cvaug/scoring.h"

namespace cvaug {

/// Error count per reference position. Substitutions and deletions mark
/// their own position; an insertion is charged to the following reference
/// word, or to the last one at the end of the utterance. A reference of
/// length zero with insertions yields a single pseudo-position.
std::vector<std::size_t> project_errors(const Alignment& alignment);

struct ErrorSegment {
  std::string utterance_id;
  std::size_t begin = 0;  // first reference position
  std::size_t end = 0;    // one past the last
  std::size_t errors_a = 0;
  std::size_t errors_b = 0;

  long z() const { return static_cast<long>(errors_a) - static_cast<long>(errors_b); }
};

/// Maximal runs of positions where either system errs. Runs are bounded by
/// positions both systems got right or by the utterance edges.
std::vector<ErrorSegment> build_segments(std::string_view utterance_id,
                                         std::span<const std::size_t> marks_a,
                                         std::span<const std::size_t> marks_b);

enum class Stars { kNone, kOne, kTwo, kThree };

std::string_view to_string(Stars s);  // "", "*", "**", "***"
Stars parse_stars(std::string_view s);

// * p < .05, ** p < .01, *** p < .001.
Stars stars(double p);

// Standard normal CDF.
double normal_cdf(double x);

struct MapssweResult {
  std::size_t n_segments = 0;
  double mean_z = 0.0;
  double var_z = 0.0;  // unbiased
  double w_statistic = 0.0;
  double p_value = 1.0;  // two-sided
  bool p_is_bound = false;  // true when p_value is the reporting floor 1e-12
  Stars stars = Stars::kNone;
};

inline constexpr double kMinReportedP = 1e-12;

/// W = mean(z) / sqrt(var(z) / n), p = 2 (1 - Phi(|W|)). All-zero z gives
/// p = 1; zero variance with a non-zero mean gives p at the reporting floor.
/// Needs at least two segments.
MapssweResult mapsswe(std::span<const ErrorSegment> segments);
MapssweResult mapsswe_from_z(std::span<const long> z);

struct SystemComparison {
  std::vector<ErrorSegment> segments;
  MapssweResult result;
  std::size_t errors_a = 0;
  std::size_t errors_b = 0;
};

/// Aligns both hypothesis sets against the corpus references and runs the
/// test over the pooled segments.
SystemComparison compare_systems(const Corpus& corpus, const HypothesisMap& hyps_a,
                                 const HypothesisMap& hyps_b);

std::string format_mapsswe_json(const MapssweResult& r);
MapssweResult parse_mapsswe_json(std::string_view text);
std::string format_verdict(const SystemComparison& c, std::string_view name_a,
                           std::string_view name_b);

}  // namespace cvaug

#endif  // CVAUG_SIGNIFICANCE_H_
