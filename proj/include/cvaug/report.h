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

#ifndef CVAUG_REPORT_H_
#define CVAUG_REPORT_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvaug/significance.h"

namespace cvaug {

struct ExperimentRow {
  std::string label;
  std::string section;              // rows sharing a section share a baseline
  std::optional<double> hours;
  std::optional<double> similarity;  // mean cosine of the pair selection, if any
  double wer_read = 0.0;
  double wer_hmi = 0.0;
  double wer_avg = 0.0;  // pooled, not the mean of read and hmi
  Stars stars_read = Stars::kNone;
  Stars stars_hmi = Stars::kNone;
  bool is_baseline = false;
};

enum class TableFormat { kText, kJson, kMarkdown };

std::string_view to_string(TableFormat f);
TableFormat parse_table_format(std::string_view s);

struct LowestFlags {
  bool read = false;
  bool hmi = false;
  bool avg = false;
};

/// Per-row minimum flags, computed within each section. Every row attaining
/// the minimum is flagged.
std::vector<LowestFlags> lowest_flags(std::span<const ExperimentRow> rows);

/// Rows keep their input order; sections appear in order of first use.
/// Throws Error(kValidation) unless every section has exactly one baseline.
std::string render_table(std::span<const ExperimentRow> rows, TableFormat format);

/// Reads a JSON array of row objects. Besides literal values a row may name
/// "manifest" (hours), "score_report" (WERs) and "significance_read" /
/// "significance_hmi" (stars); relative paths resolve against the rows file.
std::vector<ExperimentRow> load_experiment_rows(const std::filesystem::path& path);
std::vector<ExperimentRow> parse_experiment_rows(std::string_view text,
                                                 const std::filesystem::path& base_dir);

}  // namespace cvaug

#endif  // CVAUG_REPORT_H_
