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

#ifndef CVAUG_AUDIO_H_
#define CVAUG_AUDIO_H_

#include <cstddef>
#include <vector>

namespace cvaug {

/// Mono PCM audio as real samples nominally in [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 16000;

  std::size_t size() const { return samples.size(); }
  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

/// True for the sample rates the toolkit accepts.
bool is_supported_rate(int sample_rate);

/// Throws Error(kDomain) unless the rate is supported and every sample is
/// finite.
void check_audio(const AudioBuffer& audio);

}  // namespace cvaug

#endif  // CVAUG_AUDIO_H_
