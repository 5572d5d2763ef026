// Copyright 2026 The replaycm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "core/corpus.hpp"
#include "core/error.hpp"

namespace replaycm {

namespace {

constexpr uint16_t kFormatPcm = 1;

uint32_t LoadU32(const char* p) {
  const auto* b = reinterpret_cast<const unsigned char*>(p);
  return uint32_t{b[0]} | uint32_t{b[1]} << 8 | uint32_t{b[2]} << 16 |
         uint32_t{b[3]} << 24;
}

uint16_t LoadU16(const char* p) {
  const auto* b = reinterpret_cast<const unsigned char*>(p);
  return static_cast<uint16_t>(b[0] | b[1] << 8);
}

void PutU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

void PutU16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

}  // namespace

AudioSignal DecodeWav(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" ||
      bytes.substr(8, 4) != "WAVE")
    Fail(ErrorCode::kUnsupportedFormat, "not a RIFF/WAVE container");

  bool have_fmt = false;
  uint16_t channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string_view id = bytes.substr(pos, 4);
    const uint32_t size = LoadU32(bytes.data() + pos + 4);
    const size_t body = pos + 8;
    if (id == "fmt ") {
      if (size < 16 || body + 16 > bytes.size())
        Fail(ErrorCode::kUnsupportedFormat, "short fmt chunk");
      const uint16_t format = LoadU16(bytes.data() + body);
      channels = LoadU16(bytes.data() + body + 2);
      rate = LoadU32(bytes.data() + body + 4);
      bits = LoadU16(bytes.data() + body + 14);
      if (format != kFormatPcm)
        Fail(ErrorCode::kUnsupportedFormat,
             "audio format " + std::to_string(format) + " is not PCM");
      if (channels != 1)
        Fail(ErrorCode::kUnsupportedFormat,
             std::to_string(channels) + " channels, expected mono");
      if (bits != 16)
        Fail(ErrorCode::kUnsupportedFormat,
             std::to_string(bits) + "-bit samples, expected 16-bit");
      if (rate != kSampleRate)
        Fail(ErrorCode::kWrongSampleRate,
             std::to_string(rate) + " Hz, expected 16000 Hz");
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt)
        Fail(ErrorCode::kUnsupportedFormat, "data chunk before fmt chunk");
      if (body + size > bytes.size())
        Fail(ErrorCode::kUnsupportedFormat, "data chunk runs past end of file");
      AudioSignal sig;
      sig.sample_rate = static_cast<int>(rate);
      sig.samples.resize(size / 2);
      for (size_t i = 0; i < sig.samples.size(); ++i) {
        const auto s = static_cast<int16_t>(LoadU16(bytes.data() + body + 2 * i));
        sig.samples[i] = s / 32768.0;
      }
      return sig;
    }
    pos = body + size + (size & 1);
  }
  Fail(ErrorCode::kUnsupportedFormat,
       have_fmt ? "missing data chunk" : "missing fmt chunk");
}

AudioSignal ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kNotFound, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return DecodeWav(ss.str());
  } catch (const Error& e) {
    throw Error(e.code(), std::string(e.what()) + " (" + path.string() + ")");
  }
}

std::string EncodeWav(const AudioSignal& signal) {
  const auto n = static_cast<uint32_t>(signal.samples.size());
  std::string out;
  out.reserve(44 + 2 * size_t{n});
  out += "RIFF";
  PutU32(out, 36 + 2 * n);
  out += "WAVEfmt ";
  PutU32(out, 16);
  PutU16(out, kFormatPcm);
  PutU16(out, 1);
  PutU32(out, static_cast<uint32_t>(signal.sample_rate));
  PutU32(out, static_cast<uint32_t>(signal.sample_rate) * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  out += "data";
  PutU32(out, 2 * n);
  for (double s : signal.samples) {
    const double q = std::clamp(std::nearbyint(s * 32768.0), -32768.0, 32767.0);
    PutU16(out, static_cast<uint16_t>(static_cast<int16_t>(q)));
  }
  return out;
}

void WriteWav(const AudioSignal& signal, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path.string());
  const std::string bytes = EncodeWav(signal);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorCode::kIoError, "short write to " + path.string());
}

}  // namespace replaycm
