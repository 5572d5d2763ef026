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


#ifndef REPLAYCM_CORE_CORPUS_HPP_
#define REPLAYCM_CORE_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/types.hpp"

namespace replaycm {

// ---------------------------------------------------------------------------
// WAV I/O. Only RIFF/WAVE PCM 16-bit mono at 16 kHz is accepted; an integer
// sample s maps to s / 32768.0.

AudioSignal ReadWav(const std::filesystem::path& path);
AudioSignal DecodeWav(std::string_view bytes);

// Samples are rounded to the nearest 16-bit step and clipped to
// [-32768, 32767].
void WriteWav(const AudioSignal& signal, const std::filesystem::path& path);
std::string EncodeWav(const AudioSignal& signal);

// ---------------------------------------------------------------------------
// Manifests.

enum class Label { kGenuine, kReplay };

const char* LabelName(Label label);
// Case-sensitive: "genuine" or "replay".
Label ParseLabel(std::string_view text);

inline constexpr const char* kNoDevice = "-";

struct UtteranceMeta {
  std::string utt_id;
  std::string audio_path;
  Label label = Label::kGenuine;
  std::string speaker_id;
  std::string phrase_id;
  std::string device_id = kNoDevice;

  bool operator==(const UtteranceMeta&) const = default;
};

struct Manifest {
  std::vector<UtteranceMeta> records;

  bool operator==(const Manifest&) const = default;
  const UtteranceMeta* Find(std::string_view utt_id) const;
  size_t CountLabel(Label label) const;
};

// Checks utt_id uniqueness and the label/device pairing rule.
void ValidateManifest(const Manifest& manifest);

Manifest ParseManifest(const std::filesystem::path& path);
Manifest ParseManifestText(std::string_view text);
std::string FormatManifest(const Manifest& manifest);
void WriteManifest(const Manifest& manifest,
                   const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Synthetic playback & recording channels.

struct RipplePoint {
  double center_hz = 0.0;
  double gain_db = 0.0;
  bool operator==(const RipplePoint&) const = default;
};

struct DeviceProfile {
  std::string device_id;
  double low_cutoff_hz = 100.0;
  double high_cutoff_hz = 7400.0;
  std::vector<RipplePoint> ripple;
  double snr_db = 35.0;

  bool operator==(const DeviceProfile&) const = default;
};

void ValidateDeviceProfile(const DeviceProfile& profile);

// Every replayed copy passes through this -10 dB shelf above 6 kHz
// regardless of device.
inline constexpr double kReplayShelfDb = -10.0;
inline constexpr double kReplayShelfHz = 6000.0;
// Spread of each ripple bump (Gaussian in dB over Hz).
inline constexpr double kRippleWidthHz = 300.0;

// |H(f)| of the whole channel: band-pass with the squared magnitude of a
// 4th-order Butterworth on each edge, ripple bumps, and the replay shelf.
double ChannelMagnitude(const DeviceProfile& profile, double hz);

// Zero-phase channel filter plus white noise at profile.snr_db relative to
// the input RMS. Output is rescaled only if its peak exceeds 0.99.
AudioSignal ApplyReplayChannel(const AudioSignal& signal,
                               const DeviceProfile& profile, uint64_t seed);

nlohmann::json DeviceProfilesToJson(const std::vector<DeviceProfile>& devices);
std::vector<DeviceProfile> DeviceProfilesFromJson(const nlohmann::json& doc);

// ---------------------------------------------------------------------------
// Synthetic corpus.

struct SynthConfig {
  int n_speakers = 6;
  int n_phrases = 4;
  int n_train_devices = 3;
  int n_heldout_devices = 3;
  double utt_seconds = 2.0;
  int reps = 2;
};

void ValidateSynthConfig(const SynthConfig& config);

struct SynthCorpus {
  std::vector<AudioSignal> signals;  // aligned with manifest.records
  Manifest manifest;
  std::vector<DeviceProfile> devices;
};

// Genuine utterances come first (speaker, phrase, rep order), followed by
// each genuine utterance replayed through every device. Train-pool devices
// are named D00.., held-out devices H00...
SynthCorpus SynthesizeCorpus(const SynthConfig& config, uint64_t seed);

// Writes wav/<utt_id>.wav, manifest.tsv and devices.json under `dir`.
void WriteCorpus(const SynthCorpus& corpus, const std::filesystem::path& dir);

// Parses the repetition index out of a synthetic utt_id ("..._r<k>..."),
// or -1 when the id does not follow the synthetic naming scheme.
int SynthRepIndex(std::string_view utt_id);

// Mixes a 64-bit seed with a stream index (SplitMix64 finalizer).
uint64_t DeriveSeed(uint64_t seed, uint64_t stream);

}  // namespace replaycm

#endif  // REPLAYCM_CORE_CORPUS_HPP_
