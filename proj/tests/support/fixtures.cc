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

#include "support/fixtures.h"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <random>
#include <stdexcept>

#include "cvaug/dsp.h"
#include "cvaug/wav.h"

namespace cvaug::testing {

namespace fs = std::filesystem;

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "cvaug_test_XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

AudioBuffer sine(double hz, double seconds, double amplitude, int rate) {
  AudioBuffer a;
  a.sample_rate = rate;
  const auto n = static_cast<std::size_t>(std::lround(seconds * rate));
  a.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.samples[i] = amplitude * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / rate);
  }
  return a;
}

AudioBuffer harmonic(double f0, double seconds, double amplitude, int rate) {
  AudioBuffer a;
  a.sample_rate = rate;
  const auto n = static_cast<std::size_t>(std::lround(seconds * rate));
  a.samples.resize(n);
  const double w[] = {1.0, 0.5, 0.25};
  for (std::size_t i = 0; i < n; ++i) {
    double v = 0.0;
    for (int h = 0; h < 3; ++h) {
      v += w[h] * std::sin(2.0 * std::numbers::pi * f0 * (h + 1) * static_cast<double>(i) / rate);
    }
    a.samples[i] = amplitude * v / 1.75;
  }
  return a;
}

AudioBuffer sine_plus_noise(double f0, double seconds, double noise, std::uint64_t seed, int rate) {
  AudioBuffer a = harmonic(f0, seconds, 0.4, rate);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  const double n = static_cast<double>(a.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    // Syllable-like envelope: two humps per second, never fully silent.
    const double env = 0.6 + 0.4 * std::sin(std::numbers::pi * 2.0 * static_cast<double>(i) / rate);
    const double fade = std::min(1.0, std::min(static_cast<double>(i), n - static_cast<double>(i)) / 160.0);
    a.samples[i] = std::clamp(a.samples[i] * env * fade + noise * n01(gen), -1.0, 1.0);
  }
  return a;
}

double dominant_frequency(const AudioBuffer& audio) {
  std::size_t n = 1;
  while (n < audio.samples.size()) n <<= 1;
  n <<= 2;  // zero-pad for finer bins
  std::vector<std::complex<double>> x(n);
  const std::size_t m = audio.samples.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                          static_cast<double>(m - 1));
    x[i] = audio.samples[i] * w;
  }
  fft(x);
  std::size_t best = 1;
  for (std::size_t k = 1; k < n / 2; ++k) {
    if (std::abs(x[k]) > std::abs(x[best])) best = k;
  }
  double shift = 0.0;
  if (best > 0 && best + 1 < n / 2) {
    const double a = std::log(std::abs(x[best - 1]) + 1e-300);
    const double b = std::log(std::abs(x[best]) + 1e-300);
    const double c = std::log(std::abs(x[best + 1]) + 1e-300);
    const double d = a - 2 * b + c;
    if (d != 0) shift = 0.5 * (a - c) / d;
  }
  return (static_cast<double>(best) + shift) * audio.sample_rate / static_cast<double>(n);
}

Corpus write_synthetic_corpus(const fs::path& dir, const std::vector<SyntheticSpeaker>& speakers,
                              std::size_t utterances_per_speaker, std::uint64_t seed) {
  static const char* kWords[] = {"de",  "kat", "zit", "op",   "mat",  "het", "huis",
                                 "is",  "rood", "wij", "gaan", "naar", "school", "vandaag"};
  std::mt19937_64 gen(seed);
  Corpus c;
  c.name = "manifest.jsonl";
  c.root = dir;
  for (const auto& spk : speakers) {
    SpeakerProfile p;
    p.speaker_id = spk.id;
    p.language = spk.language;
    p.age_group = spk.age_group;
    p.gender = spk.gender;
    for (std::size_t u = 0; u < utterances_per_speaker; ++u) {
      UtteranceRecord r;
      r.utterance_id = spk.id + "_u" + std::to_string(u);
      r.speaker_id = spk.id;
      r.audio_path = "audio/" + r.utterance_id + ".wav";
      const std::size_t n_words = 3 + gen() % 4;
      for (std::size_t w = 0; w < n_words; ++w) r.transcript.push_back(kWords[gen() % 14]);
      const double seconds = 0.6 + 0.1 * static_cast<double>(gen() % 5);
      const double f0 = spk.f0 * (1.0 + 0.02 * (static_cast<double>(gen() % 5) - 2.0));
      const AudioBuffer audio = sine_plus_noise(f0, seconds, 0.01, gen());
      write_wav(dir / r.audio_path, audio);
      r.duration = audio.duration();
      r.language = spk.language;
      r.age_group = spk.age_group;
      r.style = u % 2 == 0 ? Style::kRead : Style::kHmi;
      p.utterance_ids.push_back(r.utterance_id);
      p.total_duration += r.duration;
      c.records.push_back(std::move(r));
    }
    c.speakers.push_back(std::move(p));
  }
  write_manifest(dir / "manifest.jsonl", c);
  return c;
}

Corpus hours_fixture(const std::string& prefix, AgeGroup age, Language language, double hours,
                     std::size_t n_speakers, std::size_t utterances_per_speaker) {
  Corpus c;
  c.name = prefix;
  c.root = ".";
  const std::size_t n = n_speakers * utterances_per_speaker;
  // Exact in binary: spread total seconds evenly, put the remainder last.
  const double total = hours * 3600.0;
  const double each = std::floor(total / static_cast<double>(n) * 1000.0) / 1000.0;
  double used = 0.0;
  for (std::size_t s = 0; s < n_speakers; ++s) {
    for (std::size_t u = 0; u < utterances_per_speaker; ++u) {
      UtteranceRecord r;
      r.speaker_id = prefix + "_s" + std::to_string(s);
      r.utterance_id = r.speaker_id + "_u" + std::to_string(u);
      r.audio_path = "audio/" + r.utterance_id + ".wav";
      r.transcript = {"een", "twee"};
      const bool last = s + 1 == n_speakers && u + 1 == utterances_per_speaker;
      r.duration = last ? total - used : each;
      used += r.duration;
      r.language = language;
      r.age_group = age;
      c.records.push_back(std::move(r));
    }
  }
  c.speakers = derive_profiles(c.records);
  return c;
}

}  // namespace cvaug::testing
