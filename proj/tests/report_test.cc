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

#include "cvaug/report.h"

#include <gtest/gtest.h>

#include <fstream>

#include "cvaug/error.h"
#include "cvaug/scoring.h"
#include "json.hpp"
#include "support/fixtures.h"

namespace cvaug {
namespace {

using nlohmann::json;

ExperimentRow row(std::string label, double read, double hmi, double avg, bool baseline = false,
                  std::string section = "") {
  ExperimentRow r;
  r.label = std::move(label);
  r.section = std::move(section);
  r.wer_read = read;
  r.wer_hmi = hmi;
  r.wer_avg = avg;
  r.is_baseline = baseline;
  return r;
}

std::vector<ExperimentRow> similarity_fixture() {
  auto top = row("Top", 7.4, 16.6, 9.1, true);
  top.similarity = 0.59;
  auto random = row("Random", 7.4, 17.3, 9.2);
  random.similarity = 0.46;
  auto last = row("Last", 8.2, 18.9, 10.2);
  last.similarity = 0.29;
  return {top, random, last};
}

TEST(Report, SingleBaselineRendersWithoutStars) {
  const std::vector<ExperimentRow> rows{row("Base", 10.5, 20.3, 12.3, true)};
  const std::string text = render_table(rows, TableFormat::kText);
  EXPECT_NE(text.find("Base"), std::string::npos);
  const std::string body = text.substr(0, text.rfind("-----"));  // the legend follows the rule
  EXPECT_EQ(body.find("*"), std::string::npos);
  const auto flags = lowest_flags(rows);
  EXPECT_TRUE(flags[0].read && flags[0].hmi && flags[0].avg);
}

TEST(Report, LowerReadIsFlagged) {
  auto aug = row("Aug", 7.4, 20.0, 9.1);
  aug.stars_read = Stars::kThree;
  const std::vector<ExperimentRow> rows{row("Base", 10.5, 16.6, 12.3, true), aug};
  const auto flags = lowest_flags(rows);
  EXPECT_FALSE(flags[0].read);
  EXPECT_TRUE(flags[1].read);
  EXPECT_TRUE(flags[0].hmi);
  EXPECT_FALSE(flags[1].hmi);
  const std::string text = render_table(rows, TableFormat::kText);
  EXPECT_NE(text.find("[7.4***]"), std::string::npos);
  EXPECT_NE(text.find("[16.6]"), std::string::npos);
}

TEST(Report, SimilarityTableFlagsAllTies) {
  const auto rows = similarity_fixture();
  const auto flags = lowest_flags(rows);
  EXPECT_TRUE(flags[0].read && flags[0].hmi && flags[0].avg);
  EXPECT_TRUE(flags[1].read);  // tie at 7.4
  EXPECT_FALSE(flags[1].hmi || flags[1].avg);
  EXPECT_FALSE(flags[2].read || flags[2].hmi || flags[2].avg);
  const std::string text = render_table(rows, TableFormat::kText);
  EXPECT_NE(text.find("Similarity"), std::string::npos);
  EXPECT_NE(text.find("0.59"), std::string::npos);
  EXPECT_NE(text.find("0.29"), std::string::npos);
  EXPECT_NE(text.find("10.2"), std::string::npos);
}

TEST(Report, JsonMatchesInput) {
  const auto rows = similarity_fixture();
  const json j = json::parse(render_table(rows, TableFormat::kJson));
  const auto& out = j.at("sections").at(0).at("rows");
  ASSERT_EQ(out.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(out[i].at("label"), rows[i].label);
    EXPECT_EQ(out[i].at("wer_read").get<double>(), rows[i].wer_read);
    EXPECT_EQ(out[i].at("wer_hmi").get<double>(), rows[i].wer_hmi);
    EXPECT_EQ(out[i].at("wer_avg").get<double>(), rows[i].wer_avg);
    EXPECT_EQ(out[i].at("similarity").get<double>(), *rows[i].similarity);
  }
  EXPECT_TRUE(out[1].at("lowest").at("read").get<bool>());
}

TEST(Report, HoursDeltaAgainstBaseline) {
  auto base = row("Base2", 10.5, 20.3, 12.3, true);
  base.hours = 437.2;
  auto aug = row("Base2 + child (VCcl)", 7.4, 16.6, 9.1);
  aug.hours = 449.3;
  aug.stars_read = Stars::kThree;
  aug.stars_hmi = Stars::kTwo;
  const std::vector<ExperimentRow> rows{base, aug};
  const std::string text = render_table(rows, TableFormat::kText);
  EXPECT_NE(text.find("+12.1"), std::string::npos);
  EXPECT_NE(text.find("base"), std::string::npos);
  const std::string md = render_table(rows, TableFormat::kMarkdown);
  EXPECT_NE(md.find("|"), std::string::npos);
  EXPECT_NE(md.find("**7.4**"), std::string::npos);
  const json j = json::parse(render_table(rows, TableFormat::kJson));
  EXPECT_NEAR(j["sections"][0]["rows"][1]["hours_delta"].get<double>(), 12.1, 1e-9);
  EXPECT_EQ(j["sections"][0]["rows"][1]["stars_hmi"], "**");
}

TEST(Report, SectionsNeedExactlyOneBaseline) {
  EXPECT_THROW(render_table(std::vector<ExperimentRow>{row("A", 1, 1, 1)}, TableFormat::kText),
               Error);
  EXPECT_THROW(render_table(std::vector<ExperimentRow>{row("A", 1, 1, 1, true), row("B", 1, 1, 1, true)},
                            TableFormat::kText),
               Error);
  EXPECT_THROW(render_table(std::vector<ExperimentRow>{}, TableFormat::kText), Error);
  const std::vector<ExperimentRow> two{row("A", 2, 2, 2, true, "s1"), row("B", 1, 1, 1, true, "s2")};
  EXPECT_NO_THROW(render_table(two, TableFormat::kText));
  const auto flags = lowest_flags(two);
  EXPECT_TRUE(flags[0].read && flags[1].read);  // minima are per section
}

TEST(Report, ParseRowsFromJsonAndArtifacts) {
  testing::TempDir dir;
  ScoreReport report;
  report.sets = {{"read", {100, 5, 1, 1, 94}, 7.0}, {"hmi", {50, 8, 0, 0, 42}, 16.0}};
  report.pooled = {"avg", {150, 13, 1, 1, 136}, 10.0};
  {
    std::ofstream f(dir / "score.json");
    f << format_score_json(report);
  }
  const std::string text = R"([
    {"label": "Base", "baseline": true, "hours": 437.2, "wer_read": 10.5, "wer_hmi": 20.3, "wer_avg": 12.3},
    {"label": "Aug", "hours": 449.3, "score_report": "score.json", "stars_read": "***"}
  ])";
  const std::vector<ExperimentRow> rows = parse_experiment_rows(text, dir.path());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0].is_baseline);
  EXPECT_EQ(rows[0].hours, 437.2);
  EXPECT_EQ(rows[1].stars_read, Stars::kThree);
  EXPECT_DOUBLE_EQ(rows[1].wer_read, 7.0);
  EXPECT_DOUBLE_EQ(rows[1].wer_avg, 10.0);
}

TEST(Report, BaselineWithStarsIsRejected) {
  EXPECT_THROW(parse_experiment_rows(
                   R"([{"label":"B","baseline":true,"wer_read":1,"wer_hmi":1,"wer_avg":1,"stars_read":"*"}])",
                   "."),
               Error);
}

TEST(Report, FormatNames) {
  EXPECT_EQ(parse_table_format("md"), TableFormat::kMarkdown);
  EXPECT_EQ(parse_table_format("json"), TableFormat::kJson);
  EXPECT_THROW(parse_table_format("csv"), Error);
}

}  // namespace
}  // namespace cvaug
