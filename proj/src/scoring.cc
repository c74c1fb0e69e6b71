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

#include "cvaug/scoring.h"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "cvaug/error.h"
#include "cvaug/io.h"
#include "json.hpp"

namespace cvaug {

using nlohmann::json;

namespace {

std::vector<char32_t> decode_utf8(std::string_view s) {
  std::vector<char32_t> out;
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    int len = 1;
    char32_t cp = c;
    if (c >= 0xF0 && c < 0xF8) {
      len = 4;
      cp = c & 0x07;
    } else if (c >= 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if (c >= 0xC0) {
      len = 2;
      cp = c & 0x1F;
    }
    if (len > 1) {
      if (i + static_cast<std::size_t>(len) > s.size()) {
        cp = 0xFFFD;
        len = 1;
      } else {
        for (int k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
      }
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(len);
  }
  return out;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

char32_t lower(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 32;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  return c;
}

bool is_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' ||
         c == U'\v' || c == 0xA0;
}

bool is_unicode_punct(char32_t c) {
  switch (c) {
    case 0xA1: case 0xAB: case 0xBB: case 0xBF: case 0xB7:
    case 0x2013: case 0x2014: case 0x201C: case 0x201D: case 0x201E:
    case 0x2026: case 0x2039: case 0x203A:
      return true;
    default:
      return false;
  }
}

bool is_word(char32_t c) {
  if (c < 0x80) {
    return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || (c >= U'0' && c <= U'9');
  }
  return !is_space(c) && !is_unicode_punct(c) && c != 0x2018 && c != 0x2019;
}

// Rest of the token from `from` is a one- or two-character clitic.
bool is_clitic_tail(const std::vector<char32_t>& tok, std::size_t from) {
  std::size_t n = 0;
  std::size_t i = from;
  while (i < tok.size() && is_word(tok[i])) {
    ++n;
    ++i;
  }
  if (n == 0 || n > 2) return false;
  for (; i < tok.size(); ++i) {
    if (is_word(tok[i])) return false;
  }
  return true;
}

std::string clean_token(const std::vector<char32_t>& tok) {
  std::vector<char32_t> out;
  for (std::size_t i = 0; i < tok.size(); ++i) {
    const char32_t c = tok[i];
    if (is_word(c)) {
      out.push_back(c);
      continue;
    }
    if (c != U'\'' && c != U'-') continue;
    const bool next_word = i + 1 < tok.size() && is_word(tok[i + 1]);
    const bool prev_word = !out.empty() && is_word(out.back());
    if (prev_word && next_word) {
      out.push_back(c);
    } else if (c == U'\'' && out.empty() && next_word && is_clitic_tail(tok, i + 1)) {
      out.push_back(c);
    }
  }
  std::string s;
  for (char32_t c : out) encode_utf8(c, s);
  return s;
}

}  // namespace

std::vector<std::string> normalize_text(std::string_view raw) {
  std::vector<std::string> tokens;
  std::vector<char32_t> tok;
  auto flush = [&] {
    if (tok.empty()) return;
    std::string t = clean_token(tok);
    if (!t.empty()) tokens.push_back(std::move(t));
    tok.clear();
  };
  for (char32_t c : decode_utf8(raw)) {
    if (is_space(c)) {
      flush();
      continue;
    }
    if (c == 0x2018 || c == 0x2019) c = U'\'';
    tok.push_back(lower(c));
  }
  flush();
  return tokens;
}

std::string_view to_string(EditOp op) {
  switch (op) {
    case EditOp::kMatch: return "match";
    case EditOp::kSubstitution: return "substitution";
    case EditOp::kInsertion: return "insertion";
    case EditOp::kDeletion: return "deletion";
  }
  return "?";
}

EditCounts& EditCounts::operator+=(const EditCounts& o) {
  n_ref += o.n_ref;
  n_sub += o.n_sub;
  n_ins += o.n_ins;
  n_del += o.n_del;
  n_match += o.n_match;
  return *this;
}

Alignment align(std::span<const std::string> ref, std::span<const std::string> hyp,
                std::string utterance_id) {
  const std::size_t n = ref.size(), m = hyp.size();
  const std::size_t w = m + 1;
  std::vector<std::uint32_t> d((n + 1) * w);
  for (std::size_t j = 0; j <= m; ++j) d[j] = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    d[i * w] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const std::uint32_t diag = d[(i - 1) * w + j - 1] + (ref[i - 1] == hyp[j - 1] ? 0u : 1u);
      const std::uint32_t up = d[(i - 1) * w + j] + 1;
      const std::uint32_t left = d[i * w + j - 1] + 1;
      d[i * w + j] = std::min({diag, up, left});
    }
  }

  Alignment a;
  a.utterance_id = std::move(utterance_id);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const std::uint32_t cur = d[i * w + j];
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && d[(i - 1) * w + j - 1] == cur) {
      a.ops.push_back({EditOp::kMatch, ref[i - 1], hyp[j - 1]});
      ++a.counts.n_match;
      --i;
      --j;
    } else if (i > 0 && j > 0 && ref[i - 1] != hyp[j - 1] && d[(i - 1) * w + j - 1] + 1 == cur) {
      a.ops.push_back({EditOp::kSubstitution, ref[i - 1], hyp[j - 1]});
      ++a.counts.n_sub;
      --i;
      --j;
    } else if (i > 0 && d[(i - 1) * w + j] + 1 == cur) {
      a.ops.push_back({EditOp::kDeletion, ref[i - 1], {}});
      ++a.counts.n_del;
      --i;
    } else {
      a.ops.push_back({EditOp::kInsertion, {}, hyp[j - 1]});
      ++a.counts.n_ins;
      --j;
    }
  }
  std::reverse(a.ops.begin(), a.ops.end());
  a.counts.n_ref = n;
  return a;
}

ScoreRow wer(std::span<const Alignment> alignments, std::string name) {
  ScoreRow row;
  row.name = std::move(name);
  for (const auto& a : alignments) row.counts += a.counts;
  if (row.counts.n_ref == 0) {
    throw Error(ErrorKind::kDomain, "WER of set \"" + row.name + "\" has no reference words");
  }
  row.wer = 100.0 * static_cast<double>(row.counts.errors()) / static_cast<double>(row.counts.n_ref);
  return row;
}

ScoreRow pool_rows(std::span<const ScoreRow> rows, std::string name) {
  ScoreRow out;
  out.name = std::move(name);
  for (const auto& r : rows) out.counts += r.counts;
  if (out.counts.n_ref == 0) {
    throw Error(ErrorKind::kDomain, "pooled WER has no reference words");
  }
  out.wer = 100.0 * static_cast<double>(out.counts.errors()) / static_cast<double>(out.counts.n_ref);
  return out;
}

const ScoreRow* ScoreReport::find_set(std::string_view name) const {
  for (const auto& r : sets) {
    if (r.name == name) return &r;
  }
  if (pooled.name == name) return &pooled;
  return nullptr;
}

HypothesisMap parse_hypotheses(std::string_view text) {
  HypothesisMap out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto tab = line.find('\t');
    std::string id = line.substr(0, tab);
    std::string hyp = tab == std::string::npos ? "" : line.substr(tab + 1);
    if (id.empty()) {
      throw Error(ErrorKind::kParse, "hypothesis line " + std::to_string(line_no) + " has no id");
    }
    if (!out.emplace(id, std::move(hyp)).second) {
      throw Error(ErrorKind::kValidation, "duplicate hypothesis id \"" + id + "\" at line " +
                                              std::to_string(line_no));
    }
  }
  return out;
}

HypothesisMap load_hypotheses(const std::filesystem::path& path) {
  return parse_hypotheses(read_text_file(path));
}

std::string format_hypotheses(const HypothesisMap& hyps) {
  std::string out;
  for (const auto& [id, text] : hyps) out += id + "\t" + text + "\n";
  return out;
}

std::vector<std::string> reference_tokens(const UtteranceRecord& record) {
  std::string joined;
  for (const auto& w : record.transcript) {
    if (!joined.empty()) joined += ' ';
    joined += w;
  }
  return normalize_text(joined);
}

std::vector<Alignment> align_corpus(const Corpus& corpus, const HypothesisMap& hyps) {
  std::vector<Alignment> out;
  out.reserve(corpus.records.size());
  for (const auto& r : corpus.records) {
    auto it = hyps.find(r.utterance_id);
    if (it == hyps.end()) {
      throw Error(ErrorKind::kValidation, "no hypothesis for utterance \"" + r.utterance_id + "\"");
    }
    out.push_back(align(reference_tokens(r), normalize_text(it->second), r.utterance_id));
  }
  return out;
}

ScoreReport score_hypotheses(const Corpus& corpus, const HypothesisMap& hyps) {
  const std::vector<Alignment> alignments = align_corpus(corpus, hyps);
  ScoreReport report;
  for (Style style : {Style::kRead, Style::kHmi, Style::kSpontaneous}) {
    std::vector<Alignment> mine;
    for (std::size_t i = 0; i < corpus.records.size(); ++i) {
      if (corpus.records[i].style == style) mine.push_back(alignments[i]);
    }
    if (mine.empty()) continue;
    EditCounts c;
    for (const auto& a : mine) c += a.counts;
    if (c.n_ref == 0) continue;
    report.sets.push_back(wer(mine, std::string(to_string(style))));
  }
  report.pooled = wer(alignments, "avg");

  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<Alignment>> by_speaker;
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    const auto& spk = corpus.records[i].speaker_id;
    auto [it, inserted] = by_speaker.try_emplace(spk);
    if (inserted) order.push_back(spk);
    it->second.push_back(alignments[i]);
  }
  for (const auto& spk : order) {
    EditCounts c;
    for (const auto& a : by_speaker[spk]) c += a.counts;
    if (c.n_ref == 0) continue;
    report.speakers.push_back(wer(by_speaker[spk], spk));
  }
  return report;
}

ScoreReport score_hypotheses(const Corpus& corpus, const std::filesystem::path& hyp_file) {
  return score_hypotheses(corpus, load_hypotheses(hyp_file));
}

namespace {

std::string row_line(const ScoreRow& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-14s %8zu %6zu %6zu %6zu %8zu %7.1f\n", r.name.c_str(),
                r.counts.n_ref, r.counts.n_sub, r.counts.n_del, r.counts.n_ins,
                r.counts.errors(), r.wer);
  return buf;
}

json row_json(const ScoreRow& r) {
  return {{"name", r.name},
          {"n_ref_words", r.counts.n_ref},
          {"n_sub", r.counts.n_sub},
          {"n_del", r.counts.n_del},
          {"n_ins", r.counts.n_ins},
          {"n_match", r.counts.n_match},
          {"n_errors", r.counts.errors()},
          {"wer", r.wer}};
}

ScoreRow row_from_json(const json& j) {
  ScoreRow r;
  r.name = j.at("name").get<std::string>();
  r.counts.n_ref = j.at("n_ref_words").get<std::size_t>();
  r.counts.n_sub = j.at("n_sub").get<std::size_t>();
  r.counts.n_del = j.at("n_del").get<std::size_t>();
  r.counts.n_ins = j.at("n_ins").get<std::size_t>();
  r.counts.n_match = j.value("n_match", std::size_t{0});
  r.wer = j.at("wer").get<double>();
  return r;
}

}  // namespace

std::string format_score_text(const ScoreReport& report) {
  std::string out = "set                 words    sub    del    ins   errors    WER%\n";
  for (const auto& r : report.sets) out += row_line(r);
  out += row_line(report.pooled);
  if (!report.speakers.empty()) {
    out += "\nspeaker             words    sub    del    ins   errors    WER%\n";
    for (const auto& r : report.speakers) out += row_line(r);
  }
  return out;
}

std::string format_score_json(const ScoreReport& report) {
  json j;
  json sets = json::array();
  for (const auto& r : report.sets) sets.push_back(row_json(r));
  j["sets"] = std::move(sets);
  j["pooled"] = row_json(report.pooled);
  json speakers = json::array();
  for (const auto& r : report.speakers) speakers.push_back(row_json(r));
  j["speakers"] = std::move(speakers);
  return j.dump(2) + "\n";
}

ScoreReport parse_score_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    ScoreReport r;
    for (const auto& s : j.at("sets")) r.sets.push_back(row_from_json(s));
    r.pooled = row_from_json(j.at("pooled"));
    if (j.contains("speakers")) {
      for (const auto& s : j.at("speakers")) r.speakers.push_back(row_from_json(s));
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("score report: ") + e.what());
  }
}

}  // namespace cvaug
