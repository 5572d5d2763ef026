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


#ifndef REPLAYCM_CORE_ARCHIVE_HPP_
#define REPLAYCM_CORE_ARCHIVE_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "core/filterbank.hpp"
#include "core/fratio.hpp"

namespace replaycm {

// Binary feature archive ("RPFA", version 1, little-endian):
//   magic[4] | u16 version | u32 header_len | header JSON (UTF-8)
//   then per entry: u16 id_len | id | u32 n_frames | u32 dim | f32[n*dim]
// Entries are stored in utt_id order.
struct FeatureArchive {
  ExtractionConfig config;
  FeatureMap entries;
};

inline constexpr char kArchiveMagic[4] = {'R', 'P', 'F', 'A'};
inline constexpr uint16_t kArchiveVersion = 1;

nlohmann::json ExtractionConfigToJson(const ExtractionConfig& config);
ExtractionConfig ExtractionConfigFromJson(const nlohmann::json& doc);

// Throws unless every entry matches the config's kind and dimension.
void ValidateArchive(const FeatureArchive& archive);

std::string EncodeArchive(const FeatureArchive& archive);
FeatureArchive DecodeArchive(std::string_view bytes);

void WriteArchive(const FeatureArchive& archive,
                  const std::filesystem::path& path);
FeatureArchive ReadArchive(const std::filesystem::path& path);

// Expected row width for a config: bands, 13 or 26.
int FeatureDim(const ExtractionConfig& config);

}  // namespace replaycm

#endif  // REPLAYCM_CORE_ARCHIVE_HPP_
