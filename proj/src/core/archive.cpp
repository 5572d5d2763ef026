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


#include "core/archive.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace replaycm {

namespace {

static_assert(std::endian::native == std::endian::little,
              "archive I/O assumes a little-endian host");

template <typename T>
void Put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T Get(const char* what) {
    T v;
    std::memcpy(&v, Take(sizeof(T), what).data(), sizeof(T));
    return v;
  }

  std::string_view Take(size_t n, const char* what) {
    if (n > bytes_.size() - pos_)
      Fail(ErrorCode::kTruncated,
           std::string(what) + " needs " + std::to_string(n) + " bytes, " +
               std::to_string(bytes_.size() - pos_) + " remain");
    std::string_view out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  size_t pos_ = 0;
};

}  // namespace

int FeatureDim(const ExtractionConfig& config) {
  switch (config.feature) {
    case FeatureKind::kLogFbank: return config.bands;
    case FeatureKind::kCepstra: return kNumCepstra;
    case FeatureKind::kCepstraWithDeltas: return 2 * kNumCepstra;
  }
  return 0;
}

nlohmann::json ExtractionConfigToJson(const ExtractionConfig& c) {
  return {{"feature_kind", FeatureKindName(c.feature)},
          {"feature_tag", FeatureTag(c)},
          {"warp", WarpName(c.warp)},
          {"bands", c.bands},
          {"frame_len", c.frame_len},
          {"hop", c.hop},
          {"n_fft", c.n_fft},
          {"f_lo", c.f_lo},
          {"f_hi", c.f_hi},
          {"delta_window", c.delta_window}};
}

ExtractionConfig ExtractionConfigFromJson(const nlohmann::json& doc) {
  try {
    ExtractionConfig c;
    c.feature = ParseFeatureKind(doc.at("feature_kind").get<std::string>());
    c.warp = ParseWarp(doc.at("warp").get<std::string>());
    c.bands = doc.at("bands").get<int>();
    c.frame_len = doc.at("frame_len").get<int>();
    c.hop = doc.at("hop").get<int>();
    c.n_fft = doc.at("n_fft").get<int>();
    c.f_lo = doc.at("f_lo").get<double>();
    c.f_hi = doc.at("f_hi").get<double>();
    c.delta_window = doc.at("delta_window").get<int>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kUnsupportedFormat,
         std::string("archive header: ") + e.what());
  }
}

void ValidateArchive(const FeatureArchive& archive) {
  const int dim = FeatureDim(archive.config);
  for (const auto& [id, feats] : archive.entries) {
    if (feats.kind != archive.config.feature || feats.dim() != dim)
      Fail(ErrorCode::kMismatchedConfig,
           "entry '" + id + "' does not match the archive feature config");
    if (id.size() > 0xffff)
      Fail(ErrorCode::kInvalidArgument, "utt_id longer than 65535 bytes");
  }
}

std::string EncodeArchive(const FeatureArchive& archive) {
  ValidateArchive(archive);
  std::string out(kArchiveMagic, 4);
  Put<uint16_t>(out, kArchiveVersion);
  const std::string header = ExtractionConfigToJson(archive.config).dump();
  Put<uint32_t>(out, static_cast<uint32_t>(header.size()));
  out += header;
  for (const auto& [id, feats] : archive.entries) {
    Put<uint16_t>(out, static_cast<uint16_t>(id.size()));
    out += id;
    Put<uint32_t>(out, static_cast<uint32_t>(feats.num_frames()));
    Put<uint32_t>(out, static_cast<uint32_t>(feats.dim()));
    for (Eigen::Index t = 0; t < feats.values.rows(); ++t)
      for (Eigen::Index j = 0; j < feats.values.cols(); ++j)
        Put<float>(out, static_cast<float>(feats.values(t, j)));
  }
  return out;
}

FeatureArchive DecodeArchive(std::string_view bytes) {
  Reader in(bytes);
  if (in.Take(4, "magic") != std::string_view(kArchiveMagic, 4))
    Fail(ErrorCode::kBadMagic, "not an RPFA feature archive");
  const auto version = in.Get<uint16_t>("version");
  if (version != kArchiveVersion)
    Fail(ErrorCode::kUnsupportedVersion,
         "archive version " + std::to_string(version));
  const auto header_len = in.Get<uint32_t>("header length");
  const std::string_view header = in.Take(header_len, "header");

  FeatureArchive archive;
  try {
    archive.config = ExtractionConfigFromJson(nlohmann::json::parse(header));
  } catch (const nlohmann::json::parse_error& e) {
    Fail(ErrorCode::kUnsupportedFormat,
         std::string("archive header: ") + e.what());
  }
  while (!in.done()) {
    const auto id_len = in.Get<uint16_t>("id length");
    std::string id(in.Take(id_len, "utt_id"));
    const auto n = in.Get<uint32_t>("frame count");
    const auto dim = in.Get<uint32_t>("dim");
    const uint64_t count = uint64_t{n} * dim;
    if (count > bytes.size() / sizeof(float))
      Fail(ErrorCode::kTruncated, "entry '" + id + "' declares " +
                                      std::to_string(count) + " values");
    const std::string_view body = in.Take(count * sizeof(float), "feature values");
    FeatureMatrix feats;
    feats.kind = archive.config.feature;
    feats.values.resize(n, dim);
    for (uint64_t i = 0; i < count; ++i) {
      float v;
      std::memcpy(&v, body.data() + i * sizeof(float), sizeof(float));
      feats.values.data()[i] = v;
    }
    if (!archive.entries.emplace(std::move(id), std::move(feats)).second)
      Fail(ErrorCode::kDuplicateUttId, "archive repeats an utt_id");
  }
  ValidateArchive(archive);
  return archive;
}

void WriteArchive(const FeatureArchive& archive,
                  const std::filesystem::path& path) {
  const std::string bytes = EncodeArchive(archive);
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorCode::kIoError, "short write to " + path.string());
}

FeatureArchive ReadArchive(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kNotFound, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return DecodeArchive(ss.str());
}

}  // namespace replaycm
