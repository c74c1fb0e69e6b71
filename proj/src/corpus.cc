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

#include "cvaug/corpus.h"

#include <cmath>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include "cvaug/error.h"
#include "cvaug/io.h"
#include "cvaug/wav.h"
#include "json.hpp"

namespace cvaug {

using nlohmann::json;

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::pair<E, std::string_view> (&table)[N],
             std::string_view what) {
  for (const auto& [value, name] : table) {
    if (name == s) return value;
  }
  throw Error(ErrorKind::kParse,
              "unknown " + std::string(what) + " \"" + std::string(s) + "\"");
}

template <typename E, std::size_t N>
std::string_view enum_name(E v, const std::pair<E, std::string_view> (&table)[N]) {
  for (const auto& [value, name] : table) {
    if (value == v) return name;
  }
  return "?";
}

constexpr std::pair<Language, std::string_view> kLanguages[] = {
    {Language::kNl, "nl"}, {Language::kDe, "de"}, {Language::kEn, "en"}};
constexpr std::pair<AgeGroup, std::string_view> kAgeGroups[] = {
    {AgeGroup::kChild, "child"}, {AgeGroup::kTeen, "teen"}, {AgeGroup::kAdult, "adult"}};
constexpr std::pair<Style, std::string_view> kStyles[] = {
    {Style::kRead, "read"}, {Style::kHmi, "hmi"}, {Style::kSpontaneous, "spontaneous"}};
constexpr std::pair<Origin, std::string_view> kOrigins[] = {
    {Origin::kOriginal, "original"},
    {Origin::kPitchShift, "pitch_shift"},
    {Origin::kVcMonolingual, "vc_monolingual"},
    {Origin::kVcCrosslingual, "vc_crosslingual"}};
constexpr std::pair<Gender, std::string_view> kGenders[] = {
    {Gender::kMale, "m"}, {Gender::kFemale, "f"}, {Gender::kUnknown, "unknown"}};

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string json_quote(std::string_view s) { return json(std::string(s)).dump(); }

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorKind::kParse, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string require_string(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_string())
    throw Error(ErrorKind::kParse, std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

double require_number(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_number())
    throw Error(ErrorKind::kParse, std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

UtteranceRecord record_from_json(const json& j) {
  UtteranceRecord r;
  r.utterance_id = require_string(j, "utterance_id");
  r.speaker_id = require_string(j, "speaker_id");
  r.audio_path = require_string(j, "audio_path");
  const json& transcript = require(j, "transcript");
  if (!transcript.is_array())
    throw Error(ErrorKind::kParse, "field \"transcript\" must be an array of words");
  for (const auto& w : transcript) {
    if (!w.is_string()) throw Error(ErrorKind::kParse, "transcript words must be strings");
    r.transcript.push_back(w.get<std::string>());
  }
  r.duration = require_number(j, "duration");
  r.language = parse_language(require_string(j, "language"));
  r.age_group = parse_age_group(require_string(j, "age_group"));
  r.style = parse_style(require_string(j, "style"));
  r.origin = parse_origin(require_string(j, "origin"));
  if (auto it = j.find("provenance"); it != j.end() && !it->is_null()) {
    Provenance p;
    p.source_utterance_id = require_string(*it, "source_utterance_id");
    if (auto pit = it->find("params"); pit != it->end()) {
      if (!pit->is_object()) throw Error(ErrorKind::kParse, "provenance params must be an object");
      for (const auto& [k, v] : pit->items()) {
        p.params[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
    }
    r.provenance = std::move(p);
  }
  return r;
}

SpeakerProfile profile_from_json(const json& j, bool& has_duration) {
  SpeakerProfile p;
  p.speaker_id = require_string(j, "speaker_id");
  p.language = parse_language(require_string(j, "language"));
  p.age_group = parse_age_group(require_string(j, "age_group"));
  if (auto it = j.find("gender"); it != j.end()) {
    p.gender = parse_gender(it->get<std::string>());
  }
  has_duration = j.contains("total_duration");
  if (has_duration) p.total_duration = require_number(j, "total_duration");
  if (auto it = j.find("utterance_ids"); it != j.end()) {
    for (const auto& u : *it) p.utterance_ids.push_back(u.get<std::string>());
  }
  return p;
}

}  // namespace

std::string_view to_string(Language v) { return enum_name(v, kLanguages); }
std::string_view to_string(AgeGroup v) { return enum_name(v, kAgeGroups); }
std::string_view to_string(Style v) { return enum_name(v, kStyles); }
std::string_view to_string(Origin v) { return enum_name(v, kOrigins); }
std::string_view to_string(Gender v) { return enum_name(v, kGenders); }

Language parse_language(std::string_view s) { return parse_enum(s, kLanguages, "language"); }
AgeGroup parse_age_group(std::string_view s) { return parse_enum(s, kAgeGroups, "age_group"); }
Style parse_style(std::string_view s) { return parse_enum(s, kStyles, "style"); }
Origin parse_origin(std::string_view s) { return parse_enum(s, kOrigins, "origin"); }
Gender parse_gender(std::string_view s) { return parse_enum(s, kGenders, "gender"); }

const UtteranceRecord* Corpus::find_record(std::string_view utterance_id) const {
  for (const auto& r : records) {
    if (r.utterance_id == utterance_id) return &r;
  }
  return nullptr;
}

const SpeakerProfile* Corpus::find_speaker(std::string_view speaker_id) const {
  for (const auto& s : speakers) {
    if (s.speaker_id == speaker_id) return &s;
  }
  return nullptr;
}

std::vector<SpeakerProfile> derive_profiles(
    const std::vector<UtteranceRecord>& records,
    const std::vector<SpeakerProfile>& known) {
  std::vector<SpeakerProfile> out;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& r : records) {
    auto [it, inserted] = index.try_emplace(r.speaker_id, out.size());
    if (inserted) {
      SpeakerProfile p;
      p.speaker_id = r.speaker_id;
      p.language = r.language;
      p.age_group = r.age_group;
      for (const auto& k : known) {
        if (k.speaker_id == r.speaker_id) {
          p.language = k.language;
          p.age_group = k.age_group;
          p.gender = k.gender;
          break;
        }
      }
      out.push_back(std::move(p));
    }
    SpeakerProfile& p = out[it->second];
    p.utterance_ids.push_back(r.utterance_id);
    p.total_duration += r.duration;
  }
  return out;
}

Corpus parse_manifest(std::string_view text, std::string name,
                      std::filesystem::path root) {
  Corpus corpus;
  corpus.name = std::move(name);
  corpus.root = std::move(root);

  struct Declared {
    SpeakerProfile profile;
    bool has_duration = false;
  };
  std::vector<Declared> declared;
  std::unordered_map<std::string, std::size_t> record_lines;
  std::unordered_map<std::string, std::size_t> declared_index;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    const std::string where = corpus.name + ":" + std::to_string(line_no) + ": ";
    try {
      const json j = json::parse(line);
      if (!j.is_object()) throw Error(ErrorKind::kParse, "line is not a JSON object");
      if (auto it = j.find("speaker_profile"); it != j.end()) {
        Declared d;
        d.profile = profile_from_json(*it, d.has_duration);
        if (!declared_index.try_emplace(d.profile.speaker_id, declared.size()).second) {
          throw Error(ErrorKind::kValidation,
                      "duplicate speaker profile \"" + d.profile.speaker_id + "\"");
        }
        declared.push_back(std::move(d));
        continue;
      }
      UtteranceRecord r = record_from_json(j);
      if (auto [it, ok] = record_lines.try_emplace(r.utterance_id, line_no); !ok) {
        throw Error(ErrorKind::kValidation,
                    "duplicate utterance_id \"" + r.utterance_id +
                        "\" (first seen at line " + std::to_string(it->second) + ")");
      }
      corpus.records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kParse, where + e.what());
    } catch (const Error& e) {
      throw Error(e.kind(), where + e.what());
    }
    if (end == text.size()) break;
  }

  if (declared.empty()) {
    corpus.speakers = derive_profiles(corpus.records);
    return corpus;
  }

  for (const auto& r : corpus.records) {
    if (!declared_index.count(r.speaker_id)) {
      throw Error(ErrorKind::kValidation,
                  corpus.name + ": utterance \"" + r.utterance_id +
                      "\" references undeclared speaker \"" + r.speaker_id + "\"");
    }
  }
  std::vector<SpeakerProfile> known;
  for (const auto& d : declared) known.push_back(d.profile);
  const std::vector<SpeakerProfile> derived = derive_profiles(corpus.records, known);
  std::unordered_map<std::string, const SpeakerProfile*> derived_by_id;
  for (const auto& p : derived) derived_by_id[p.speaker_id] = &p;

  for (auto& d : declared) {
    SpeakerProfile p = d.profile;
    auto it = derived_by_id.find(p.speaker_id);
    if (p.utterance_ids.empty() && it != derived_by_id.end()) {
      p.utterance_ids = it->second->utterance_ids;
    }
    if (!d.has_duration && it != derived_by_id.end()) {
      p.total_duration = it->second->total_duration;
    }
    corpus.speakers.push_back(std::move(p));
  }
  return corpus;
}

Corpus load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_text_file(path), path.filename().string(),
                        path.has_parent_path() ? path.parent_path() : ".");
}

std::string format_manifest(const Corpus& corpus) {
  std::string out;
  for (const auto& p : corpus.speakers) {
    out += "{\"speaker_profile\":{\"speaker_id\":" + json_quote(p.speaker_id) +
           ",\"language\":" + json_quote(to_string(p.language)) +
           ",\"age_group\":" + json_quote(to_string(p.age_group)) +
           ",\"gender\":" + json_quote(to_string(p.gender)) +
           ",\"total_duration\":" + fixed6(p.total_duration) + "}}\n";
  }
  for (const auto& r : corpus.records) {
    out += "{\"utterance_id\":" + json_quote(r.utterance_id) +
           ",\"speaker_id\":" + json_quote(r.speaker_id) +
           ",\"audio_path\":" + json_quote(r.audio_path) + ",\"transcript\":[";
    for (std::size_t i = 0; i < r.transcript.size(); ++i) {
      if (i) out += ",";
      out += json_quote(r.transcript[i]);
    }
    out += "],\"duration\":" + fixed6(r.duration) +
           ",\"language\":" + json_quote(to_string(r.language)) +
           ",\"age_group\":" + json_quote(to_string(r.age_group)) +
           ",\"style\":" + json_quote(to_string(r.style)) +
           ",\"origin\":" + json_quote(to_string(r.origin));
    if (r.provenance) {
      out += ",\"provenance\":{\"source_utterance_id\":" +
             json_quote(r.provenance->source_utterance_id) + ",\"params\":{";
      bool first = true;
      for (const auto& [k, v] : r.provenance->params) {
        if (!first) out += ",";
        first = false;
        out += json_quote(k) + ":" + json_quote(v);
      }
      out += "}}";
    }
    out += "}\n";
  }
  return out;
}

void write_manifest(const std::filesystem::path& path, const Corpus& corpus) {
  write_text_file(path, format_manifest(corpus));
}

std::vector<Violation> validate(const Corpus& corpus, const ValidateOptions& options) {
  std::vector<Violation> out;
  auto add = [&](const std::string& subject, std::string message) {
    out.push_back({subject, std::move(message)});
  };

  std::unordered_map<std::string, const UtteranceRecord*> by_id;
  for (const auto& r : corpus.records) {
    if (!by_id.try_emplace(r.utterance_id, &r).second) {
      add(r.utterance_id, "duplicate utterance_id");
    }
  }

  std::unordered_map<std::string, const SpeakerProfile*> profiles;
  for (const auto& p : corpus.speakers) {
    if (!profiles.try_emplace(p.speaker_id, &p).second) {
      add(p.speaker_id, "duplicate speaker profile");
    }
  }

  std::unordered_map<std::string, double> seconds_by_speaker;
  std::unordered_map<std::string, std::size_t> records_by_speaker;
  std::unordered_set<std::string> speakers_with_records;
  for (const auto& r : corpus.records) {
    speakers_with_records.insert(r.speaker_id);
    seconds_by_speaker[r.speaker_id] += r.duration;
    ++records_by_speaker[r.speaker_id];
    if (!std::isfinite(r.duration) || r.duration < 0.0) {
      add(r.utterance_id, "duration must be a finite non-negative number");
    } else if (!r.audio_path.empty() && r.duration <= 0.0) {
      add(r.utterance_id, "duration must be positive for a record with audio");
    }
    if (!profiles.count(r.speaker_id)) {
      add(r.utterance_id, "speaker \"" + r.speaker_id + "\" has no profile");
    }
    if (r.is_generated()) {
      if (!r.provenance) {
        add(r.utterance_id, "generated record without provenance");
      } else {
        auto src = by_id.find(r.provenance->source_utterance_id);
        if (src == by_id.end()) {
          add(r.utterance_id, "provenance source \"" +
                                  r.provenance->source_utterance_id +
                                  "\" not in corpus");
        } else if (src->second->transcript != r.transcript) {
          add(r.utterance_id, "transcript differs from provenance source \"" +
                                  r.provenance->source_utterance_id + "\"");
        }
      }
    }
    if (options.check_audio && !r.audio_path.empty()) {
      const auto file = corpus.audio_file(r);
      std::error_code ec;
      if (!std::filesystem::exists(file, ec)) {
        add(r.utterance_id, "audio file missing: " + file.string());
        continue;
      }
      try {
        const WavInfo info = read_wav_info(file);
        if (!info.is_pcm16_mono()) {
          add(r.utterance_id, "audio is not 16-bit PCM mono");
        }
        if (options.expected_rate > 0 && info.sample_rate != options.expected_rate) {
          add(r.utterance_id, "sample rate " + std::to_string(info.sample_rate) +
                                  " Hz, expected " +
                                  std::to_string(options.expected_rate));
        }
        if (std::abs(info.duration() - r.duration) > options.duration_tolerance) {
          add(r.utterance_id, "manifest duration " + fixed6(r.duration) +
                                  " s disagrees with audio header " +
                                  fixed6(info.duration()) + " s");
        }
      } catch (const Error& e) {
        add(r.utterance_id, e.what());
      }
    }
  }

  for (const auto& p : corpus.speakers) {
    if (!speakers_with_records.count(p.speaker_id)) {
      add(p.speaker_id, "orphan speaker profile (no utterances)");
      continue;
    }
    const double expected = seconds_by_speaker[p.speaker_id];
    // Every serialized duration carries up to half a microsecond of rounding.
    const double slack =
        options.profile_tolerance * static_cast<double>(1 + records_by_speaker[p.speaker_id]);
    if (std::abs(expected - p.total_duration) > slack) {
      add(p.speaker_id, "total_duration " + fixed6(p.total_duration) +
                            " s but utterances sum to " + fixed6(expected) + " s");
    }
    std::size_t listed_matching = 0;
    for (const auto& id : p.utterance_ids) {
      auto it = by_id.find(id);
      if (it == by_id.end()) {
        add(p.speaker_id, "listed utterance \"" + id + "\" does not exist");
      } else if (it->second->speaker_id != p.speaker_id) {
        add(p.speaker_id, "listed utterance \"" + id + "\" belongs to speaker \"" +
                              it->second->speaker_id + "\"");
      } else {
        ++listed_matching;
      }
    }
    std::size_t actual = 0;
    for (const auto& r : corpus.records) actual += r.speaker_id == p.speaker_id;
    if (listed_matching != actual) {
      add(p.speaker_id, "utterance list incomplete: " + std::to_string(listed_matching) +
                            " of " + std::to_string(actual) + " listed");
    }
  }
  return out;
}

bool CorpusFilter::matches(const UtteranceRecord& r) const {
  if (!languages.empty() && !languages.count(r.language)) return false;
  if (!age_groups.empty() && !age_groups.count(r.age_group)) return false;
  if (!styles.empty() && !styles.count(r.style)) return false;
  if (!origins.empty() && !origins.count(r.origin)) return false;
  if (predicate && !predicate(r)) return false;
  return true;
}

Corpus subset(const Corpus& corpus, const CorpusFilter& filter) {
  Corpus out;
  out.name = corpus.name;
  out.root = corpus.root;
  for (const auto& r : corpus.records) {
    if (filter.matches(r)) out.records.push_back(r);
  }
  out.speakers = derive_profiles(out.records, corpus.speakers);
  return out;
}

Corpus rebase(const Corpus& corpus, const std::filesystem::path& new_root) {
  Corpus out = corpus;
  if (std::filesystem::absolute(corpus.root).lexically_normal() ==
      std::filesystem::absolute(new_root).lexically_normal()) {
    out.root = new_root;
    return out;
  }
  const auto base = std::filesystem::absolute(new_root).lexically_normal();
  for (auto& r : out.records) {
    if (r.audio_path.empty()) continue;
    const auto abs = std::filesystem::absolute(corpus.root / r.audio_path).lexically_normal();
    r.audio_path = abs.lexically_relative(base).generic_string();
  }
  out.root = new_root;
  return out;
}

Corpus merge(const Corpus& a, const Corpus& b) {
  Corpus out = a;
  std::unordered_set<std::string> ids;
  for (const auto& r : a.records) ids.insert(r.utterance_id);
  const Corpus rebased = rebase(b, a.root);
  for (const auto& r : rebased.records) {
    if (!ids.insert(r.utterance_id).second) {
      throw Error(ErrorKind::kValidation,
                  "cannot merge: utterance_id \"" + r.utterance_id + "\" in both corpora");
    }
    out.records.push_back(r);
  }
  std::vector<SpeakerProfile> known = a.speakers;
  known.insert(known.end(), b.speakers.begin(), b.speakers.end());
  out.speakers = derive_profiles(out.records, known);
  return out;
}

double total_seconds(const Corpus& corpus) {
  double s = 0.0;
  for (const auto& r : corpus.records) s += r.duration;
  return s;
}

double total_hours(const Corpus& corpus) { return total_seconds(corpus) / 3600.0; }

CorpusStats compute_stats(const Corpus& corpus) {
  CorpusStats st;
  st.utterances = corpus.records.size();
  st.speakers = corpus.speakers.size();
  st.hours = total_hours(corpus);
  for (const auto& r : corpus.records) {
    st.hours_by_style[std::string(to_string(r.style))] += r.duration / 3600.0;
    st.hours_by_age_group[std::string(to_string(r.age_group))] += r.duration / 3600.0;
    st.hours_by_origin[std::string(to_string(r.origin))] += r.duration / 3600.0;
  }
  for (const auto& p : corpus.speakers) {
    ++st.speakers_by_age_group[std::string(to_string(p.age_group))];
  }
  return st;
}

}  // namespace cvaug
