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

#ifndef CVAUG_WAV_H_
#define CVAUG_WAV_H_

#include <cstdint>
#include <filesystem>

#include "cvaug/audio.h"

namespace cvaug {

struct WavInfo {
  int sample_rate = 0;
  int channels = 0;
  int bits_per_sample = 0;
  int format_tag = 0;  // 1 = integer PCM
  std::uint64_t frames = 0;

  double duration() const {
    return sample_rate > 0 ? static_cast<double>(frames) / sample_rate : 0.0;
  }
  bool is_pcm16_mono() const {
    return format_tag == 1 && channels == 1 && bits_per_sample == 16;
  }
};

// Reads only the RIFF header chunks.
WavInfo read_wav_info(const std::filesystem::path& path);

/// Reads a 16-bit PCM mono RIFF file. Other layouts are rejected. When
/// `target_rate` is nonzero and differs from the file's rate the signal is
/// resampled with the band-limited resampler.
AudioBuffer read_wav(const std::filesystem::path& path, int target_rate = 0);

/// Writes 16-bit PCM mono. Samples are clipped to [-1, 1] and rounded to the
/// nearest integer step. Parent directories are created.
void write_wav(const std::filesystem::path& path, const AudioBuffer& audio);

}  // namespace cvaug

#endif  // CVAUG_WAV_H_
