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

#include "cvaug/dsp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cvaug/error.h"

namespace cvaug {

namespace {

constexpr double kPi = std::numbers::pi;

Error domain_error(const std::string& what) { return Error(ErrorKind::kDomain, what); }

std::size_t to_samples(double seconds, int rate) {
  return static_cast<std::size_t>(std::llround(seconds * rate));
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

double blackman(double u) {  // u in [-1, 1]
  return 0.42 + 0.5 * std::cos(kPi * u) + 0.08 * std::cos(2.0 * kPi * u);
}

// Band-limited evaluation of `in` at fractional positions start + n * step.
std::vector<double> interpolate(const std::vector<double>& in, double step,
                                std::size_t out_len) {
  constexpr double kZeroCrossings = 16.0;
  const double cutoff = std::min(1.0, 1.0 / step);
  const double half_width = kZeroCrossings / cutoff;
  const auto n_in = static_cast<long>(in.size());
  std::vector<double> out(out_len, 0.0);
  for (std::size_t n = 0; n < out_len; ++n) {
    const double t = static_cast<double>(n) * step;
    const long first = std::max(0L, static_cast<long>(std::ceil(t - half_width)));
    const long last = std::min(n_in - 1, static_cast<long>(std::floor(t + half_width)));
    double acc = 0.0;
    for (long k = first; k <= last; ++k) {
      const double d = t - static_cast<double>(k);
      if (std::abs(d) >= half_width) continue;
      acc += in[static_cast<std::size_t>(k)] * cutoff * sinc(cutoff * d) *
             blackman(d / half_width);
    }
    out[n] = acc;
  }
  return out;
}

}  // namespace

double cents_to_ratio(double cents) {
  if (!std::isfinite(cents) || std::abs(cents) > 2400.0) {
    throw domain_error("cents out of range [-2400, 2400]: " + std::to_string(cents));
  }
  return std::exp2(cents / 1200.0);
}

double ratio_to_cents(double ratio) {
  if (!(ratio > 0.0)) throw domain_error("frequency ratio must be positive");
  return 1200.0 * std::log2(ratio);
}

bool is_supported_rate(int rate) {
  return rate == 8000 || rate == 16000 || rate == 22050 || rate == 44100 || rate == 48000;
}

void check_audio(const AudioBuffer& audio) {
  if (!is_supported_rate(audio.sample_rate)) {
    throw domain_error("unsupported sample rate " + std::to_string(audio.sample_rate));
  }
  for (double s : audio.samples) {
    if (!std::isfinite(s)) throw domain_error("audio contains non-finite samples");
  }
}

std::size_t F0Track::voiced_frames() const {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [](const auto& v) { return v.has_value(); }));
}

std::vector<double> F0Track::voiced_values() const {
  std::vector<double> out;
  for (const auto& v : values) {
    if (v) out.push_back(*v);
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw domain_error("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

F0Track estimate_f0(const AudioBuffer& audio, double frame, double hop,
                    const F0Options& options) {
  check_audio(audio);
  if (!(options.f_min > 0.0) || options.f_max <= options.f_min) {
    throw domain_error("invalid F0 search range");
  }
  if (frame + 1e-12 < 2.0 / options.f_min) {
    throw domain_error("F0 frame must hold two periods of f_min (" +
                       std::to_string(2.0 / options.f_min) + " s)");
  }
  if (!(hop > 0.0)) throw domain_error("F0 hop must be positive");
  const int sr = audio.sample_rate;
  const std::size_t frame_len = to_samples(frame, sr);
  const std::size_t hop_len = std::max<std::size_t>(1, to_samples(hop, sr));
  if (audio.size() < frame_len) throw domain_error("audio shorter than one F0 frame");

  const auto min_lag = static_cast<std::size_t>(std::floor(sr / options.f_max));
  const auto max_lag = std::min(frame_len - 2,
                                static_cast<std::size_t>(std::ceil(sr / options.f_min)));

  F0Track track;
  track.frame_hop = static_cast<double>(hop_len) / sr;
  const std::size_t n_frames = 1 + (audio.size() - frame_len) / hop_len;
  track.values.resize(n_frames);

  std::vector<double> x(frame_len);
  std::vector<double> r(max_lag + 2, 0.0);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const double* src = audio.samples.data() + f * hop_len;
    double mean = 0.0;
    for (std::size_t i = 0; i < frame_len; ++i) mean += src[i];
    mean /= static_cast<double>(frame_len);
    double energy = 0.0;
    for (std::size_t i = 0; i < frame_len; ++i) {
      x[i] = src[i] - mean;
      energy += x[i] * x[i];
    }
    if (energy < 1e-10 * static_cast<double>(frame_len)) continue;

    const std::size_t lo = std::max<std::size_t>(1, min_lag - 1);
    const std::size_t hi = max_lag + 1;
    for (std::size_t lag = lo; lag <= hi; ++lag) {
      double xy = 0.0, xx = 0.0, yy = 0.0;
      for (std::size_t n = 0; n + lag < frame_len; ++n) {
        xy += x[n] * x[n + lag];
        xx += x[n] * x[n];
        yy += x[n + lag] * x[n + lag];
      }
      r[lag] = (xx > 0.0 && yy > 0.0) ? xy / std::sqrt(xx * yy) : 0.0;
    }

    double peak = -1.0;
    for (std::size_t lag = std::max(lo + 1, min_lag); lag < hi; ++lag) peak = std::max(peak, r[lag]);
    if (peak < options.voicing_threshold) continue;

    // Shortest-lag local maximum close to the global one avoids octave-down
    // errors on strongly periodic frames.
    std::size_t best = 0;
    for (std::size_t lag = std::max(lo + 1, min_lag); lag < hi; ++lag) {
      if (r[lag] >= r[lag - 1] && r[lag] >= r[lag + 1] && r[lag] >= 0.9 * peak) {
        best = lag;
        break;
      }
    }
    if (best == 0) continue;
    const double a = r[best - 1], b = r[best], c = r[best + 1];
    const double denom = a - 2.0 * b + c;
    const double delta = denom != 0.0 ? std::clamp(0.5 * (a - c) / denom, -0.5, 0.5) : 0.0;
    const double f0 = sr / (static_cast<double>(best) + delta);
    if (f0 < options.f_min || f0 > options.f_max) continue;
    track.values[f] = f0;
  }
  const auto voiced = track.voiced_values();
  if (!voiced.empty()) track.median_f0 = median(voiced);
  return track;
}

AudioBuffer resample(const AudioBuffer& audio, double ratio) {
  if (!(ratio >= 0.25 && ratio <= 4.0)) {
    throw domain_error("resample ratio out of range [0.25, 4]: " + std::to_string(ratio));
  }
  if (ratio == 1.0) return audio;
  AudioBuffer out;
  out.sample_rate = audio.sample_rate;
  const auto out_len = static_cast<std::size_t>(
      std::llround(static_cast<double>(audio.size()) / ratio));
  out.samples = interpolate(audio.samples, ratio, out_len);
  return out;
}

AudioBuffer resample_to_rate(const AudioBuffer& audio, int target_rate) {
  if (!is_supported_rate(target_rate)) {
    throw domain_error("unsupported target rate " + std::to_string(target_rate));
  }
  if (target_rate == audio.sample_rate) return audio;
  const double step = static_cast<double>(audio.sample_rate) / target_rate;
  AudioBuffer out;
  out.sample_rate = target_rate;
  const auto out_len = static_cast<std::size_t>(
      std::llround(static_cast<double>(audio.size()) / step));
  out.samples = interpolate(audio.samples, step, out_len);
  return out;
}

void WsolaParams::check() const {
  if (!(segment > 0.0)) throw domain_error("WSOLA segment must be positive");
  if (!(overlap > 0.0) || overlap >= segment)
    throw domain_error("WSOLA overlap must be in (0, segment)");
  if (search_radius < 0.0 || search_radius >= segment)
    throw domain_error("WSOLA search radius must be in [0, segment)");
}

AudioBuffer wsola_stretch(const AudioBuffer& audio, double factor,
                          const WsolaParams& params) {
  if (!(factor >= 0.5 && factor <= 2.0)) {
    throw domain_error("stretch factor out of range [0.5, 2]: " + std::to_string(factor));
  }
  params.check();
  check_audio(audio);
  const int sr = audio.sample_rate;
  const long seg = static_cast<long>(to_samples(params.segment, sr));
  const long ovl = std::max(1L, static_cast<long>(to_samples(params.overlap, sr)));
  const long radius = static_cast<long>(to_samples(params.search_radius, sr));
  const long hop_out = seg - ovl;
  const long n_in = static_cast<long>(audio.size());
  if (n_in < seg) throw domain_error("audio shorter than one WSOLA segment");

  const std::vector<double>& in = audio.samples;
  const auto target = static_cast<long>(std::llround(static_cast<double>(n_in) * factor));
  std::vector<double> out(static_cast<std::size_t>(target + seg), 0.0);
  std::copy(in.begin(), in.begin() + seg, out.begin());

  std::vector<double> fade(static_cast<std::size_t>(ovl));
  for (long i = 0; i < ovl; ++i) {
    fade[i] = 0.5 - 0.5 * std::cos(kPi * (static_cast<double>(i) + 0.5) / ovl);
  }

  long prev = 0;
  for (long k = 1;; ++k) {
    const long out_pos = k * hop_out;
    if (out_pos + ovl >= target) break;
    const long nominal = std::llround(static_cast<double>(out_pos) / factor);
    const long ref = std::min(prev + hop_out, n_in - ovl);
    long lo = std::max(0L, nominal - radius);
    long hi = std::min(n_in - seg, nominal + radius);
    if (lo > hi) lo = hi = std::clamp(nominal, 0L, n_in - seg);

    long best = lo;
    double best_score = -std::numeric_limits<double>::infinity();
    for (long c = lo; c <= hi; ++c) {
      double xy = 0.0, yy = 0.0;
      for (long i = 0; i < ovl; ++i) {
        xy += in[c + i] * in[ref + i];
        yy += in[c + i] * in[c + i];
      }
      const double score = yy > 0.0 ? xy / std::sqrt(yy) : 0.0;
      const bool better = score > best_score + 1e-12 ||
                          (std::abs(score - best_score) <= 1e-12 &&
                           std::abs(c - nominal) < std::abs(best - nominal));
      if (better) {
        best = c;
        best_score = score;
      }
    }

    for (long i = 0; i < ovl; ++i) {
      double& o = out[out_pos + i];
      o = o * (1.0 - fade[i]) + in[best + i] * fade[i];
    }
    for (long i = ovl; i < seg; ++i) out[out_pos + i] = in[best + i];
    prev = best;
  }

  out.resize(static_cast<std::size_t>(target));
  for (double& s : out) s = std::clamp(s, -1.0, 1.0);
  return AudioBuffer{std::move(out), sr};
}

AudioBuffer pitch_shift(const AudioBuffer& audio, double cents, const WsolaParams& params) {
  if (!std::isfinite(cents) || std::abs(cents) > 1200.0) {
    throw domain_error("pitch shift out of range [-1200, 1200] cents: " + std::to_string(cents));
  }
  const double r = cents_to_ratio(cents);
  return resample(wsola_stretch(audio, r, params), r);
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

void fft(std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  if (n == 0 || (n & (n - 1)) != 0) throw domain_error("FFT size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * kPi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(angle), std::sin(angle));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const auto u = x[i + j];
        const auto v = x[i + j + len / 2] * w;
        x[i + j] = u + v;
        x[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

FeatureMatrix mel_spectrogram(const AudioBuffer& audio, std::size_t n_mels,
                              double frame, double hop) {
  if (n_mels < 1) throw domain_error("n_mels must be at least 1");
  if (!(hop > 0.0) || frame < hop) throw domain_error("mel frame must be >= hop > 0");
  check_audio(audio);
  const int sr = audio.sample_rate;
  const std::size_t frame_len = to_samples(frame, sr);
  const std::size_t hop_len = std::max<std::size_t>(1, to_samples(hop, sr));
  if (audio.size() < frame_len || frame_len == 0)
    throw domain_error("audio shorter than one mel frame");
  std::size_t n_fft = 1;
  while (n_fft < frame_len) n_fft <<= 1;
  const std::size_t n_bins = n_fft / 2 + 1;

  std::vector<double> window(frame_len);
  for (std::size_t i = 0; i < frame_len; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / frame_len);
  }

  // Triangular filters over FFT bin centre frequencies.
  const double mel_hi = hz_to_mel(sr / 2.0);
  std::vector<double> edges(n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_hi * static_cast<double>(i) / static_cast<double>(n_mels + 1));
  }
  std::vector<double> weights(n_mels * n_bins, 0.0);
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double left = edges[m], centre = edges[m + 1], right = edges[m + 2];
    for (std::size_t b = 0; b < n_bins; ++b) {
      const double f = static_cast<double>(b) * sr / static_cast<double>(n_fft);
      double w = 0.0;
      if (f >= left && f <= centre) {
        w = (f - left) / (centre - left);
      } else if (f > centre && f <= right) {
        w = (right - f) / (right - centre);
      }
      weights[m * n_bins + b] = w;
    }
  }

  FeatureMatrix out;
  out.rows = 1 + (audio.size() - frame_len) / hop_len;
  out.cols = n_mels;
  out.data.assign(out.rows * out.cols, 0.0);
  std::vector<std::complex<double>> buf(n_fft);
  std::vector<double> power(n_bins);
  for (std::size_t f = 0; f < out.rows; ++f) {
    std::fill(buf.begin(), buf.end(), std::complex<double>{});
    const double* src = audio.samples.data() + f * hop_len;
    for (std::size_t i = 0; i < frame_len; ++i) buf[i] = src[i] * window[i];
    fft(buf);
    for (std::size_t b = 0; b < n_bins; ++b) power[b] = std::norm(buf[b]);
    for (std::size_t m = 0; m < n_mels; ++m) {
      double e = 0.0;
      const double* w = weights.data() + m * n_bins;
      for (std::size_t b = 0; b < n_bins; ++b) e += w[b] * power[b];
      out(f, m) = std::log(std::max(e, kLogFloor));
    }
  }
  return out;
}

}  // namespace cvaug
