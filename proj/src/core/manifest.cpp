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


#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "core/corpus.hpp"
#include "core/error.hpp"

namespace replaycm {

namespace {

constexpr std::array<const char*, 6> kColumns = {
    "utt_id", "audio_path", "label", "speaker_id", "phrase_id", "device_id"};

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

const char* LabelName(Label label) {
  return label == Label::kGenuine ? "genuine" : "replay";
}

Label ParseLabel(std::string_view text) {
  if (text == "genuine") return Label::kGenuine;
  if (text == "replay") return Label::kReplay;
  Fail(ErrorCode::kUnknownLabel, "label '" + std::string(text) + "'");
}

const UtteranceMeta* Manifest::Find(std::string_view utt_id) const {
  for (const auto& r : records)
    if (r.utt_id == utt_id) return &r;
  return nullptr;
}

size_t Manifest::CountLabel(Label label) const {
  size_t n = 0;
  for (const auto& r : records) n += r.label == label;
  return n;
}

void ValidateManifest(const Manifest& manifest) {
  if (manifest.records.empty())
    Fail(ErrorCode::kEmptyManifest, "manifest has no records");
  std::set<std::string_view> seen;
  for (const auto& r : manifest.records) {
    if (!seen.insert(r.utt_id).second)
      Fail(ErrorCode::kDuplicateUttId, "utt_id '" + r.utt_id + "'");
    const bool no_device = r.device_id == kNoDevice;
    if (r.label == Label::kGenuine && !no_device)
      Fail(ErrorCode::kInvalidArgument,
           "genuine utterance '" + r.utt_id + "' must have device_id '-'");
    if (r.label == Label::kReplay && no_device)
      Fail(ErrorCode::kInvalidArgument,
           "replay utterance '" + r.utt_id + "' needs a device_id");
  }
}

Manifest ParseManifestText(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start <= text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = nl + 1;
  }
  if (lines.empty()) Fail(ErrorCode::kEmptyManifest, "no header line");

  const auto header = SplitTabs(lines[0]);
  std::array<size_t, kColumns.size()> index{};
  for (size_t c = 0; c < kColumns.size(); ++c) {
    size_t i = 0;
    while (i < header.size() && header[i] != kColumns[c]) ++i;
    if (i == header.size())
      Fail(ErrorCode::kMissingColumn,
           std::string("header lacks column '") + kColumns[c] + "'");
    index[c] = i;
  }

  Manifest m;
  for (size_t ln = 1; ln < lines.size(); ++ln) {
    const auto fields = SplitTabs(lines[ln]);
    if (fields.size() < header.size())
      Fail(ErrorCode::kMissingColumn,
           "line " + std::to_string(ln + 1) + " has " +
               std::to_string(fields.size()) + " fields, expected " +
               std::to_string(header.size()));
    UtteranceMeta r;
    r.utt_id = fields[index[0]];
    r.audio_path = fields[index[1]];
    r.label = ParseLabel(fields[index[2]]);
    r.speaker_id = fields[index[3]];
    r.phrase_id = fields[index[4]];
    r.device_id = fields[index[5]];
    m.records.push_back(std::move(r));
  }
  ValidateManifest(m);
  return m;
}

Manifest ParseManifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kNotFound, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseManifestText(ss.str());
}

std::string FormatManifest(const Manifest& manifest) {
  std::string out;
  for (size_t c = 0; c < kColumns.size(); ++c) {
    if (c) out += '\t';
    out += kColumns[c];
  }
  out += '\n';
  for (const auto& r : manifest.records) {
    out += r.utt_id + '\t' + r.audio_path + '\t' + LabelName(r.label) + '\t' +
           r.speaker_id + '\t' + r.phrase_id + '\t' + r.device_id + '\n';
  }
  return out;
}

void WriteManifest(const Manifest& manifest,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path.string());
  out << FormatManifest(manifest);
  if (!out) Fail(ErrorCode::kIoError, "short write to " + path.string());
}

}  // namespace replaycm
