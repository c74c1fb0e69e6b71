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

#include <algorithm>
#include <cstdio>
#include <map>

#include "cvaug/corpus.h"
#include "cvaug/error.h"
#include "cvaug/io.h"
#include "cvaug/scoring.h"
#include "json.hpp"

namespace cvaug {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fixed1(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  std::string s = buf;
  if (s == "-0.0") s = "0.0";
  return s;
}

// Similarities are cosines, shown to two places.
std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string signed1(double v) {
  std::string s = fixed1(v);
  return s[0] == '-' ? s : "+" + s;
}

// Section names in order of first appearance, each with its row indices.
std::vector<std::pair<std::string, std::vector<std::size_t>>> group_sections(
    std::span<const ExperimentRow> rows) {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const auto& s) { return s.first == rows[i].section; });
    if (it == out.end()) {
      out.push_back({rows[i].section, {}});
      it = out.end() - 1;
    }
    it->second.push_back(i);
  }
  return out;
}

struct Prepared {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> sections;
  std::vector<LowestFlags> lowest;
  std::vector<std::optional<double>> hours_delta;
  bool any_hours = false;
  bool any_similarity = false;
};

Prepared prepare(std::span<const ExperimentRow> rows) {
  if (rows.empty()) throw Error(ErrorKind::kValidation, "report needs at least one row");
  Prepared p;
  p.sections = group_sections(rows);
  p.lowest = lowest_flags(rows);
  p.hours_delta.resize(rows.size());
  for (const auto& [name, idx] : p.sections) {
    const ExperimentRow* base = nullptr;
    std::size_t n_base = 0;
    for (std::size_t i : idx) {
      if (rows[i].is_baseline) {
        base = &rows[i];
        ++n_base;
      }
    }
    const std::string where = name.empty() ? "the table" : "section \"" + name + "\"";
    if (n_base == 0) throw Error(ErrorKind::kValidation, "no baseline row in " + where);
    if (n_base > 1) throw Error(ErrorKind::kValidation, "more than one baseline row in " + where);
    for (std::size_t i : idx) {
      if (rows[i].hours && base->hours) p.hours_delta[i] = *rows[i].hours - *base->hours;
    }
  }
  for (const auto& r : rows) {
    p.any_hours = p.any_hours || r.hours.has_value();
    p.any_similarity = p.any_similarity || r.similarity.has_value();
  }
  return p;
}

std::string wer_cell(double wer, Stars s, bool lowest, TableFormat f) {
  const std::string stars{to_string(s)};
  if (f == TableFormat::kMarkdown) {
    std::string escaped;
    for (std::size_t i = 0; i < stars.size(); ++i) escaped += "\\*";
    return (lowest ? "**" + fixed1(wer) + "**" : fixed1(wer)) + escaped;
  }
  const std::string v = fixed1(wer) + stars;
  return lowest ? "[" + v + "]" : v;
}

std::vector<std::vector<std::string>> cells(std::span<const ExperimentRow> rows,
                                            const Prepared& p, TableFormat f,
                                            std::span<const std::size_t> idx) {
  std::vector<std::vector<std::string>> out;
  for (std::size_t i : idx) {
    const ExperimentRow& r = rows[i];
    std::vector<std::string> c{r.label};
    if (p.any_similarity) c.push_back(r.similarity ? fixed2(*r.similarity) : "-");
    if (p.any_hours) {
      c.push_back(r.hours ? fixed1(*r.hours) : "-");
      c.push_back(r.is_baseline ? "base" : (p.hours_delta[i] ? signed1(*p.hours_delta[i]) : "-"));
    }
    c.push_back(wer_cell(r.wer_read, r.stars_read, p.lowest[i].read, f));
    c.push_back(wer_cell(r.wer_hmi, r.stars_hmi, p.lowest[i].hmi, f));
    c.push_back(wer_cell(r.wer_avg, Stars::kNone, p.lowest[i].avg, f));
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<std::string> header(const Prepared& p) {
  std::vector<std::string> h{"Training data"};
  if (p.any_similarity) h.push_back("Similarity");
  if (p.any_hours) {
    h.push_back("Hours");
    h.push_back("dHours");
  }
  h.insert(h.end(), {"Read", "HMI", "Avg."});
  return h;
}

std::string render_text(std::span<const ExperimentRow> rows, const Prepared& p) {
  const auto head = header(p);
  std::vector<std::vector<std::vector<std::string>>> body;
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) width[c] = head[c].size();
  for (const auto& [name, idx] : p.sections) {
    body.push_back(cells(rows, p, TableFormat::kText, idx));
    for (const auto& line : body.back())
      for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  auto line_of = [&](const std::vector<std::string>& c) {
    std::string s;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (k) s += "  ";
      if (k == 0) {
        s += c[k] + std::string(width[k] - c[k].size(), ' ');
      } else {
        s += std::string(width[k] - c[k].size(), ' ') + c[k];
      }
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s + "\n";
  };
  std::size_t total = 0;
  for (auto w : width) total += w;
  total += 2 * (width.size() - 1);
  const std::string rule(total, '-');

  std::string out = line_of(head) + rule + "\n";
  for (std::size_t s = 0; s < p.sections.size(); ++s) {
    if (!p.sections[s].first.empty()) out += p.sections[s].first + "\n";
    for (const auto& line : body[s]) out += line_of(line);
    out += rule + "\n";
  }
  out += "[x] lowest WER in its section; * p < .05, ** p < .01, *** p < .001 vs. baseline\n";
  return out;
}

std::string render_markdown(std::span<const ExperimentRow> rows, const Prepared& p) {
  const auto head = header(p);
  auto line_of = [](const std::vector<std::string>& c) {
    std::string s = "|";
    for (const auto& x : c) s += " " + x + " |";
    return s + "\n";
  };
  std::string sep = "|";
  for (std::size_t c = 0; c < head.size(); ++c) sep += c == 0 ? " :--- |" : " ---: |";
  std::string out;
  for (const auto& [name, idx] : p.sections) {
    if (!out.empty()) out += "\n";
    if (!name.empty()) out += "### " + name + "\n\n";
    out += line_of(head) + sep + "\n";
    for (const auto& line : cells(rows, p, TableFormat::kMarkdown, idx)) out += line_of(line);
  }
  out += "\nBold: lowest WER in its section. \\* p < .05, \\*\\* p < .01, \\*\\*\\* p < .001 "
         "vs. baseline.\n";
  return out;
}

std::string render_json(std::span<const ExperimentRow> rows, const Prepared& p) {
  json sections = json::array();
  for (const auto& [name, idx] : p.sections) {
    json js;
    js["name"] = name;
    js["rows"] = json::array();
    for (std::size_t i : idx) {
      const ExperimentRow& r = rows[i];
      json j;
      j["label"] = r.label;
      j["is_baseline"] = r.is_baseline;
      j["hours"] = r.hours ? json(*r.hours) : json(nullptr);
      j["hours_delta"] = p.hours_delta[i] ? json(*p.hours_delta[i]) : json(nullptr);
      j["similarity"] = r.similarity ? json(*r.similarity) : json(nullptr);
      j["wer_read"] = r.wer_read;
      j["wer_hmi"] = r.wer_hmi;
      j["wer_avg"] = r.wer_avg;
      j["stars_read"] = std::string(to_string(r.stars_read));
      j["stars_hmi"] = std::string(to_string(r.stars_hmi));
      j["lowest"] = {{"read", p.lowest[i].read}, {"hmi", p.lowest[i].hmi},
                     {"avg", p.lowest[i].avg}};
      js["rows"].push_back(std::move(j));
    }
    sections.push_back(std::move(js));
  }
  json doc;
  doc["sections"] = std::move(sections);
  return doc.dump(2) + "\n";
}

std::optional<double> optional_number(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

std::string_view to_string(TableFormat f) {
  switch (f) {
    case TableFormat::kText: return "text";
    case TableFormat::kJson: return "json";
    case TableFormat::kMarkdown: return "markdown";
  }
  return "text";
}

TableFormat parse_table_format(std::string_view s) {
  if (s == "text") return TableFormat::kText;
  if (s == "json") return TableFormat::kJson;
  if (s == "markdown" || s == "md") return TableFormat::kMarkdown;
  throw Error(ErrorKind::kParse, "unknown table format \"" + std::string(s) + "\"");
}

std::vector<LowestFlags> lowest_flags(std::span<const ExperimentRow> rows) {
  std::vector<LowestFlags> flags(rows.size());
  for (const auto& [name, idx] : group_sections(rows)) {
    double min_read = rows[idx[0]].wer_read, min_hmi = rows[idx[0]].wer_hmi,
           min_avg = rows[idx[0]].wer_avg;
    for (std::size_t i : idx) {
      min_read = std::min(min_read, rows[i].wer_read);
      min_hmi = std::min(min_hmi, rows[i].wer_hmi);
      min_avg = std::min(min_avg, rows[i].wer_avg);
    }
    for (std::size_t i : idx) {
      flags[i].read = rows[i].wer_read == min_read;
      flags[i].hmi = rows[i].wer_hmi == min_hmi;
      flags[i].avg = rows[i].wer_avg == min_avg;
    }
  }
  return flags;
}

std::string render_table(std::span<const ExperimentRow> rows, TableFormat format) {
  const Prepared p = prepare(rows);
  switch (format) {
    case TableFormat::kText: return render_text(rows, p);
    case TableFormat::kJson: return render_json(rows, p);
    case TableFormat::kMarkdown: return render_markdown(rows, p);
  }
  return render_text(rows, p);
}

std::vector<ExperimentRow> parse_experiment_rows(std::string_view text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("rows file: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorKind::kParse, "rows file must hold a JSON array");
  auto resolve = [&](const json& j, const char* key) {
    fs::path p = j.at(key).get<std::string>();
    return p.is_absolute() ? p : base_dir / p;
  };
  std::vector<ExperimentRow> rows;
  for (std::size_t n = 0; n < doc.size(); ++n) {
    const json& j = doc[n];
    try {
      ExperimentRow r;
      r.label = j.at("label").get<std::string>();
      r.section = j.value("section", std::string{});
      r.is_baseline = j.value("baseline", false);
      r.hours = optional_number(j, "hours");
      if (j.contains("manifest")) r.hours = total_hours(load_manifest(resolve(j, "manifest")));
      r.similarity = optional_number(j, "similarity");
      if (j.contains("score_report")) {
        const ScoreReport rep = parse_score_json(read_text_file(resolve(j, "score_report")));
        const ScoreRow* read = rep.find_set("read");
        const ScoreRow* hmi = rep.find_set("hmi");
        if (!read || !hmi) {
          throw Error(ErrorKind::kValidation, "score report lacks a read or hmi set");
        }
        r.wer_read = read->wer;
        r.wer_hmi = hmi->wer;
        r.wer_avg = rep.pooled.wer;
      } else {
        r.wer_read = j.at("wer_read").get<double>();
        r.wer_hmi = j.at("wer_hmi").get<double>();
        r.wer_avg = j.at("wer_avg").get<double>();
      }
      if (j.contains("significance_read")) {
        r.stars_read = parse_mapsswe_json(read_text_file(resolve(j, "significance_read"))).stars;
      } else {
        r.stars_read = parse_stars(j.value("stars_read", std::string{}));
      }
      if (j.contains("significance_hmi")) {
        r.stars_hmi = parse_mapsswe_json(read_text_file(resolve(j, "significance_hmi"))).stars;
      } else {
        r.stars_hmi = parse_stars(j.value("stars_hmi", std::string{}));
      }
      if (r.is_baseline && (r.stars_read != Stars::kNone || r.stars_hmi != Stars::kNone)) {
        throw Error(ErrorKind::kValidation, "baseline row \"" + r.label + "\" carries stars");
      }
      rows.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kParse, "row " + std::to_string(n + 1) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<ExperimentRow> load_experiment_rows(const fs::path& path) {
  return parse_experiment_rows(read_text_file(path),
                               path.has_parent_path() ? path.parent_path() : fs::path("."));
}

}  // namespace cvaug
