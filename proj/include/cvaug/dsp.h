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

#ifndef CVAUG_DSP_H_
#define CVAUG_DSP_H_

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "cvaug/audio.h"

namespace cvaug {

/// Frequency ratio of a shift by `cents` (1/100 semitone): 2^(cents/1200).
/// |cents| must not exceed 2400.
double cents_to_ratio(double cents);

// Inverse of cents_to_ratio, for ratio > 0.
double ratio_to_cents(double ratio);

struct F0Options {
  double f_min = 60.0;
  double f_max = 500.0;
  // Frames whose peak normalized autocorrelation is below this are unvoiced.
  double voicing_threshold = 0.3;
};

struct F0Track {
  double frame_hop = 0.0;                    // seconds
  std::vector<std::optional<double>> values;  // Hz, nullopt = unvoiced
  std::optional<double> median_f0;

  std::size_t voiced_frames() const;
  std::vector<double> voiced_values() const;
};

/// Normalized-autocorrelation pitch tracker. `frame` must hold at least two
/// periods of f_min.
F0Track estimate_f0(const AudioBuffer& audio, double frame = 0.04,
                    double hop = 0.01, const F0Options& options = {});

// Median of a non-empty sample (mean of the two middle values when even).
double median(std::vector<double> values);

/// Playback-rate resampling: output sample n is the input evaluated at
/// time n * ratio, so the output has round(N / ratio) samples and every
/// frequency is scaled by `ratio`. Windowed-sinc interpolation (16 zero
/// crossings per side, Blackman window, cutoff lowered when ratio > 1).
/// The sample_rate field is left unchanged. 0.25 <= ratio <= 4.
AudioBuffer resample(const AudioBuffer& audio, double ratio);

/// Sample-rate conversion built on the same interpolator.
AudioBuffer resample_to_rate(const AudioBuffer& audio, int target_rate);

struct WsolaParams {
  double segment = 0.050;
  double search_radius = 0.010;
  double overlap = 0.0125;

  void check() const;  // throws Error(kDomain)
};

/// Waveform-similarity overlap-add time stretch: output has
/// round(factor * N) samples with pitch unchanged. 0.5 <= factor <= 2.
AudioBuffer wsola_stretch(const AudioBuffer& audio, double factor,
                          const WsolaParams& params = {});

/// Duration-preserving pitch shift: WSOLA stretch by r followed by resample
/// by r, with r = cents_to_ratio(cents). |cents| <= 1200.
AudioBuffer pitch_shift(const AudioBuffer& audio, double cents,
                        const WsolaParams& params = {});

/// Dense row-major frames x bins matrix.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Floor applied to mel energies before the log.
inline constexpr double kLogFloor = 1e-10;

/// Log-mel energies (natural log) of Hann-windowed frames. Triangular filters
/// are spaced evenly on the HTK mel scale from 0 Hz to Nyquist.
FeatureMatrix mel_spectrogram(const AudioBuffer& audio, std::size_t n_mels,
                              double frame = 0.025, double hop = 0.010);

// In-place iterative radix-2 FFT; size must be a power of two.
void fft(std::vector<std::complex<double>>& x);

}  // namespace cvaug

#endif  // CVAUG_DSP_H_
