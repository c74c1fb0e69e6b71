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

#include "cvaug/significance.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <limits>
#include <numbers>

#include "cvaug/error.h"
#include "json.hpp"

namespace cvaug {

using nlohmann::json;

std::vector<std::size_t> project_errors(const Alignment& alignment) {
  const std::size_t n_ref = alignment.counts.n_ref;
  std::vector<std::size_t> marks(std::max<std::size_t>(n_ref, alignment.counts.n_ins ? 1 : 0), 0);
  std::size_t pos = 0;
  for (const auto& op : alignment.ops) {
    switch (op.op) {
      case EditOp::kMatch:
        ++pos;
        break;
      case EditOp::kSubstitution:
      case EditOp::kDeletion:
        ++marks[pos];
        ++pos;
        break;
      case EditOp::kInsertion:
        ++marks[std::min(pos, marks.size() - 1)];
        break;
    }
  }
  return marks;
}

std::vector<ErrorSegment> build_segments(std::string_view utterance_id,
                                         std::span<const std::size_t> marks_a,
                                         std::span<const std::size_t> marks_b) {
  if (marks_a.size() != marks_b.size()) {
    throw Error(ErrorKind::kDomain, "error marks of utterance \"" + std::string(utterance_id) +
                                        "\" computed against different references");
  }
  std::vector<ErrorSegment> out;
  std::size_t i = 0;
  while (i < marks_a.size()) {
    if (marks_a[i] == 0 && marks_b[i] == 0) {
      ++i;
      continue;
    }
    ErrorSegment seg;
    seg.utterance_id = std::string(utterance_id);
    seg.begin = i;
    while (i < marks_a.size() && (marks_a[i] > 0 || marks_b[i] > 0)) {
      seg.errors_a += marks_a[i];
      seg.errors_b += marks_b[i];
      ++i;
    }
    seg.end = i;
    out.push_back(std::move(seg));
  }
  return out;
}

std::string_view to_string(Stars s) {
  switch (s) {
    case Stars::kNone: return "";
    case Stars::kOne: return "*";
    case Stars::kTwo: return "**";
    case Stars::kThree: return "***";
  }
  return "";
}

Stars parse_stars(std::string_view s) {
  if (s.empty() || s == "none") return Stars::kNone;
  if (s == "*") return Stars::kOne;
  if (s == "**") return Stars::kTwo;
  if (s == "***") return Stars::kThree;
  throw Error(ErrorKind::kParse, "unknown significance marker \"" + std::string(s) + "\"");
}

Stars stars(double p) {
  if (p < 0.001) return Stars::kThree;
  if (p < 0.01) return Stars::kTwo;
  if (p < 0.05) return Stars::kOne;
  return Stars::kNone;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

MapssweResult mapsswe_from_z(std::span<const long> z) {
  const std::size_t n = z.size();
  if (n < 2) {
    throw Error(ErrorKind::kDomain,
                "MAPSSWE needs at least two error segments, got " + std::to_string(n));
  }
  MapssweResult r;
  r.n_segments = n;
  double sum = 0.0;
  for (long v : z) sum += static_cast<double>(v);
  r.mean_z = sum / static_cast<double>(n);
  double ss = 0.0;
  for (long v : z) {
    const double d = static_cast<double>(v) - r.mean_z;
    ss += d * d;
  }
  r.var_z = ss / static_cast<double>(n - 1);

  if (r.var_z == 0.0) {
    if (r.mean_z == 0.0) {
      r.w_statistic = 0.0;
      r.p_value = 1.0;
    } else {
      r.w_statistic = std::copysign(std::numeric_limits<double>::infinity(), r.mean_z);
      r.p_value = kMinReportedP;
      r.p_is_bound = true;
    }
  } else {
    r.w_statistic = r.mean_z / std::sqrt(r.var_z / static_cast<double>(n));
    // 2 (1 - Phi(|w|)) without cancellation.
    r.p_value = std::erfc(std::abs(r.w_statistic) / std::numbers::sqrt2);
    if (r.p_value < kMinReportedP) {
      r.p_value = kMinReportedP;
      r.p_is_bound = true;
    }
    r.p_value = std::min(r.p_value, 1.0);
  }
  r.stars = stars(r.p_value);
  return r;
}

MapssweResult mapsswe(std::span<const ErrorSegment> segments) {
  std::vector<long> z;
  z.reserve(segments.size());
  for (const auto& s : segments) z.push_back(s.z());
  return mapsswe_from_z(z);
}

SystemComparison compare_systems(const Corpus& corpus, const HypothesisMap& hyps_a,
                                 const HypothesisMap& hyps_b) {
  const auto al_a = align_corpus(corpus, hyps_a);
  const auto al_b = align_corpus(corpus, hyps_b);
  SystemComparison c;
  for (std::size_t i = 0; i < al_a.size(); ++i) {
    c.errors_a += al_a[i].counts.errors();
    c.errors_b += al_b[i].counts.errors();
    const auto ma = project_errors(al_a[i]);
    auto mb = project_errors(al_b[i]);
    // Pseudo-positions only appear for empty references; pad the other side.
    auto pa = ma;
    const std::size_t len = std::max(pa.size(), mb.size());
    pa.resize(len, 0);
    mb.resize(len, 0);
    auto segs = build_segments(al_a[i].utterance_id, pa, mb);
    c.segments.insert(c.segments.end(), std::make_move_iterator(segs.begin()),
                      std::make_move_iterator(segs.end()));
  }
  c.result = mapsswe(c.segments);
  return c;
}

std::string format_mapsswe_json(const MapssweResult& r) {
  json j;
  j["n_segments"] = r.n_segments;
  j["mean_z"] = r.mean_z;
  j["var_z"] = r.var_z;
  if (std::isfinite(r.w_statistic)) {
    j["w"] = r.w_statistic;
  } else {
    j["w"] = r.w_statistic > 0 ? "inf" : "-inf";
  }
  j["p"] = r.p_value;
  j["p_is_bound"] = r.p_is_bound;
  j["stars"] = std::string(to_string(r.stars));
  return j.dump(2) + "\n";
}

MapssweResult parse_mapsswe_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    MapssweResult r;
    r.n_segments = j.at("n_segments").get<std::size_t>();
    r.mean_z = j.at("mean_z").get<double>();
    r.var_z = j.at("var_z").get<double>();
    const auto& w = j.at("w");
    if (w.is_string()) {
      r.w_statistic = std::numeric_limits<double>::infinity() * (w.get<std::string>() == "-inf" ? -1 : 1);
    } else {
      r.w_statistic = w.get<double>();
    }
    r.p_value = j.at("p").get<double>();
    r.p_is_bound = j.value("p_is_bound", false);
    r.stars = parse_stars(j.at("stars").get<std::string>());
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("MAPSSWE result: ") + e.what());
  }
}

std::string format_verdict(const SystemComparison& c, std::string_view name_a,
                           std::string_view name_b) {
  const MapssweResult& r = c.result;
  char p[64];
  if (r.p_is_bound) {
    std::snprintf(p, sizeof(p), "p < %.0e", kMinReportedP);
  } else {
    std::snprintf(p, sizeof(p), "p = %.4g", r.p_value);
  }
  char w[64];
  std::snprintf(w, sizeof(w), "%.4f", r.w_statistic);
  std::string verdict = "MAPSSWE " + std::string(name_a) + " vs " + std::string(name_b) + ": " +
                        std::to_string(r.n_segments) + " segments, W = " + w + ", " + p;
  if (r.stars == Stars::kNone) {
    verdict += ", not significant";
  } else {
    const bool a_better = c.errors_a < c.errors_b;
    verdict += " (" + std::string(to_string(r.stars)) + "), " +
               std::string(a_better ? name_a : name_b) + " makes fewer errors";
  }
  return verdict + "\n";
}

}  // namespace cvaug
