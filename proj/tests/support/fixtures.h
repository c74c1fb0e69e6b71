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

#ifndef CVAUG_TESTS_SUPPORT_FIXTURES_H_
#define CVAUG_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cvaug/audio.h"
#include "cvaug/corpus.h"

namespace cvaug::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

AudioBuffer sine(double hz, double seconds, double amplitude = 0.5, int rate = 16000);

// Three decaying harmonics of f0; a crude voiced-speech stand-in.
AudioBuffer harmonic(double f0, double seconds, double amplitude = 0.5, int rate = 16000);

// Harmonic tone with a slow amplitude envelope plus seeded white noise.
AudioBuffer sine_plus_noise(double f0, double seconds, double noise, std::uint64_t seed,
                            int rate = 16000);

// Frequency of the largest FFT magnitude (parabolic peak refinement).
double dominant_frequency(const AudioBuffer& audio);

struct SyntheticSpeaker {
  std::string id;
  Language language = Language::kNl;
  AgeGroup age_group = AgeGroup::kChild;
  Gender gender = Gender::kUnknown;
  double f0 = 250.0;
};

/// Writes audio/<utt>.wav for every utterance and <dir>/manifest.jsonl.
/// Utterances alternate read/hmi styles and draw words from a small
/// vocabulary; everything is a function of `seed`.
Corpus write_synthetic_corpus(const std::filesystem::path& dir,
                              const std::vector<SyntheticSpeaker>& speakers,
                              std::size_t utterances_per_speaker, std::uint64_t seed);

/// Audio-less corpus with `n_speakers` speakers whose durations add up to
/// exactly `hours`. Used for hour accounting.
Corpus hours_fixture(const std::string& prefix, AgeGroup age, Language language, double hours,
                     std::size_t n_speakers, std::size_t utterances_per_speaker);

}  // namespace cvaug::testing

#endif  // CVAUG_TESTS_SUPPORT_FIXTURES_H_
