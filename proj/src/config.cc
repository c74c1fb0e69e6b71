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

#include "cvaug/config.h"

#include <charconv>
#include <cstdlib>
#include <sstream>

#include "cvaug/error.h"
#include "cvaug/io.h"

namespace cvaug {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view v, const std::string& where) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw Error(ErrorKind::kParse, where + ": not a number: \"" + std::string(v) + "\"");
  }
  return out;
}

double parse_real(std::string_view v, const std::string& where) {
  // from_chars for double is missing from older libstdc++.
  std::string s(v);
  char* end = nullptr;
  const double out = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(ErrorKind::kParse, where + ": not a number: \"" + s + "\"");
  }
  return out;
}

fs::path resolve(const fs::path& base, std::string_view v) {
  fs::path p{std::string(v)};
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

std::uint64_t RunConfig::require_seed(std::string_view what) const {
  if (!seed) {
    throw Error(ErrorKind::kUsage,
                std::string(what) + " is randomized: set `seed` in the config or pass --seed");
  }
  return *seed;
}

RunConfig parse_config(std::string_view text, const fs::path& base_dir, std::string_view name) {
  RunConfig c;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = std::string(name) + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kParse, where + ": expected `key = value`");
    }
    const std::string key{trim(line.substr(0, eq))};
    const std::string_view v = trim(line.substr(eq + 1));
    if (key.empty()) throw Error(ErrorKind::kParse, where + ": empty key");
    if (!seen.insert(key).second) {
      throw Error(ErrorKind::kParse, where + ": repeated key \"" + key + "\"");
    }
    if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(v, where);
    } else if (key == "vc_backend") {
      c.vc_backend = std::string(v);
    } else if (key == "asr_backend") {
      c.asr_backend = std::string(v);
    } else if (key == "output_dir") {
      c.output_dir = resolve(base_dir, v);
    } else if (key == "jobs") {
      c.jobs = parse_number<unsigned>(v, where);
    } else if (key == "wsola.segment") {
      c.wsola.segment = parse_real(v, where);
    } else if (key == "wsola.search_radius") {
      c.wsola.search_radius = parse_real(v, where);
    } else if (key == "wsola.overlap") {
      c.wsola.overlap = parse_real(v, where);
    } else if (key == "pitch.cents_low") {
      c.pitch_cents_low = parse_number<int>(v, where);
    } else if (key == "pitch.cents_high") {
      c.pitch_cents_high = parse_number<int>(v, where);
    } else if (key == "pitch.per_speaker") {
      c.pitch_per_speaker = parse_number<std::size_t>(v, where);
    } else if (key == "pitch.age_groups") {
      c.pitch_age_groups.clear();
      std::string_view rest = v;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto item = trim(rest.substr(0, comma));
        if (!item.empty()) c.pitch_age_groups.insert(parse_age_group(item));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
    } else if (key == "pairs.strategy") {
      c.pair_strategy = parse_pair_strategy(v);
    } else if (key == "pairs.k") {
      c.pair_k = parse_number<std::size_t>(v, where);
    } else if (key == "pairs.max_folds") {
      c.max_folds = parse_number<std::size_t>(v, where);
    } else if (key == "augment.min_duration") {
      c.min_duration = parse_real(v, where);
    } else if (key.starts_with("paths.") && key.size() > 6) {
      c.paths[key.substr(6)] = resolve(base_dir, v);
    } else {
      throw Error(ErrorKind::kParse, where + ": unknown key \"" + key + "\"");
    }
  }
  return c;
}

RunConfig load_config(const fs::path& path) {
  return parse_config(read_text_file(path), path.has_parent_path() ? path.parent_path() : ".",
                      path.filename().string());
}

void apply_env_overrides(RunConfig& config, const EnvLookup& env) {
  auto get = [&](const char* k) -> std::optional<std::string> {
    if (env) return env(k);
    if (const char* v = std::getenv(k)) return std::string(v);
    return std::nullopt;
  };
  if (auto v = get("CVAUG_VC_BACKEND"); v && !v->empty()) config.vc_backend = *v;
  if (auto v = get("CVAUG_ASR_BACKEND"); v && !v->empty()) config.asr_backend = *v;
}

void validate_config(const RunConfig& c) {
  c.wsola.check();
  if (c.pitch_cents_low >= c.pitch_cents_high) {
    throw Error(ErrorKind::kDomain, "pitch.cents_low must be below pitch.cents_high");
  }
  if (c.pitch_cents_low < -1200 || c.pitch_cents_high > 1200) {
    throw Error(ErrorKind::kDomain, "pitch cents must lie within [-1200, 1200]");
  }
  const auto span = static_cast<std::size_t>(c.pitch_cents_high - c.pitch_cents_low + 1);
  if (c.pitch_per_speaker > span) {
    throw Error(ErrorKind::kDomain, "pitch.per_speaker exceeds the number of distinct cents values");
  }
  if (c.pair_k == 0) throw Error(ErrorKind::kDomain, "pairs.k must be positive");
  if (c.min_duration < 0) throw Error(ErrorKind::kDomain, "augment.min_duration is negative");
  for (const auto& [name, p] : c.paths) {
    if (!fs::exists(p)) {
      throw Error(ErrorKind::kIo, "paths." + name + ": no such file: " + p.string());
    }
  }
}

}  // namespace cvaug
