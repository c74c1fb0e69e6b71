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

#include "cvaug/wav.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "cvaug/dsp.h"
#include "cvaug/error.h"

namespace cvaug {

namespace {

std::uint32_t le32(const unsigned char* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
         (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

struct ParsedWav {
  WavInfo info;
  std::streamoff data_offset = 0;
  std::uint32_t data_bytes = 0;
};

ParsedWav parse_header(std::ifstream& in, const std::filesystem::path& path) {
  auto fail = [&](const std::string& why) {
    return Error(ErrorKind::kIo, path.string() + ": " + why);
  };
  std::array<unsigned char, 12> riff{};
  if (!in.read(reinterpret_cast<char*>(riff.data()), riff.size()))
    throw fail("truncated RIFF header");
  if (std::string(riff.begin(), riff.begin() + 4) != "RIFF" ||
      std::string(riff.begin() + 8, riff.end()) != "WAVE")
    throw fail("not a RIFF/WAVE file");

  ParsedWav parsed;
  bool have_fmt = false;
  while (true) {
    std::array<unsigned char, 8> chunk{};
    if (!in.read(reinterpret_cast<char*>(chunk.data()), chunk.size()))
      throw fail("missing data chunk");
    const std::string id(chunk.begin(), chunk.begin() + 4);
    const std::uint32_t size = le32(chunk.data() + 4);
    if (id == "fmt ") {
      if (size < 16) throw fail("fmt chunk too small");
      std::string body(size, '\0');
      if (!in.read(body.data(), size)) throw fail("truncated fmt chunk");
      const auto* b = reinterpret_cast<const unsigned char*>(body.data());
      parsed.info.format_tag = le16(b);
      parsed.info.channels = le16(b + 2);
      parsed.info.sample_rate = static_cast<int>(le32(b + 4));
      parsed.info.bits_per_sample = le16(b + 14);
      have_fmt = true;
      if (size % 2) in.ignore(1);
    } else if (id == "data") {
      if (!have_fmt) throw fail("data chunk before fmt chunk");
      parsed.data_offset = in.tellg();
      parsed.data_bytes = size;
      const int frame_bytes =
          std::max(1, parsed.info.channels * parsed.info.bits_per_sample / 8);
      parsed.info.frames = size / static_cast<std::uint32_t>(frame_bytes);
      return parsed;
    } else {
      in.ignore(static_cast<std::streamsize>(size) + (size % 2));
    }
  }
}

}  // namespace

WavInfo read_wav_info(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return parse_header(in, path).info;
}

AudioBuffer read_wav(const std::filesystem::path& path, int target_rate) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  const ParsedWav parsed = parse_header(in, path);
  if (!parsed.info.is_pcm16_mono()) {
    throw Error(ErrorKind::kIo,
                path.string() + ": expected 16-bit PCM mono, got " +
                    std::to_string(parsed.info.channels) + " channel(s), " +
                    std::to_string(parsed.info.bits_per_sample) + " bit");
  }
  std::string raw(parsed.data_bytes, '\0');
  in.seekg(parsed.data_offset);
  if (!in.read(raw.data(), parsed.data_bytes))
    throw Error(ErrorKind::kIo, path.string() + ": truncated data chunk");

  AudioBuffer audio;
  audio.sample_rate = parsed.info.sample_rate;
  audio.samples.resize(parsed.info.frames);
  const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
  for (std::size_t i = 0; i < audio.samples.size(); ++i) {
    const auto v = static_cast<std::int16_t>(le16(p + 2 * i));
    audio.samples[i] = v / 32768.0;
  }
  if (target_rate > 0 && target_rate != audio.sample_rate) {
    audio = resample_to_rate(audio, target_rate);
  }
  return audio;
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& audio) {
  const auto n = static_cast<std::uint32_t>(audio.samples.size());
  std::string out;
  out.reserve(44 + 2 * n);
  out += "RIFF";
  put32(out, 36 + 2 * n);
  out += "WAVEfmt ";
  put32(out, 16);
  put16(out, 1);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(audio.sample_rate));
  put32(out, static_cast<std::uint32_t>(audio.sample_rate) * 2);
  put16(out, 2);
  put16(out, 16);
  out += "data";
  put32(out, 2 * n);
  for (double s : audio.samples) {
    const double clipped = std::clamp(s, -1.0, 1.0);
    const long q = std::clamp(std::lround(clipped * 32768.0), -32768L, 32767L);
    put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f || !f.write(out.data(), static_cast<std::streamsize>(out.size())))
    throw Error(ErrorKind::kIo, "cannot write " + path.string());
}

}  // namespace cvaug
