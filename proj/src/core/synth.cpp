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
#include <array>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include "core/corpus.hpp"
#include "core/error.hpp"
#include "core/fft.hpp"

namespace replaycm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGenuineSnrDb = 30.0;
constexpr double kGenuineRms = 0.08;
constexpr double kPeakLimit = 0.99;
// Harmonic amplitudes are refreshed every this many samples.
constexpr int kEnvelopeBlock = 80;
// Spectral floor of the phrase envelope, relative to the strongest peak.
constexpr double kEnvelopeFloor = 0.2;
// Per-recording spectral tilt, in dB at 8 kHz, linear in frequency.
constexpr double kTiltMinDb = -10.0;
constexpr double kTiltMaxDb = 6.0;
// Each genuine recording also gets a few smooth coloration bumps anywhere in
// the band, standing in for the live capture microphone.
constexpr int kSessionBumps = 3;
constexpr double kSessionBumpDb = 6.0;
constexpr double kSessionBumpWidthHz = 500.0;

std::string Indexed(char prefix, int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%c%02d", prefix, i);
  return buf;
}

struct SpeakerTraits {
  double f0_hz;
  double tract_scale;  // multiplies every formant center
};

struct Formant {
  double center_hz;
  double width_hz;
  double gain;
  double drift_rate_hz;
  double drift_phase;
};

struct PhraseTraits {
  std::array<Formant, 3> formants;
  double syllable_rate_hz;
};

double Uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double Rms(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

void LimitPeak(std::vector<double>& x) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak > kPeakLimit) {
    const double g = kPeakLimit / peak;
    for (double& v : x) v *= g;
  }
}

double Envelope(const PhraseTraits& phrase, const SpeakerTraits& speaker,
                double hz, double t) {
  double amp = kEnvelopeFloor;
  for (const auto& f : phrase.formants) {
    const double center =
        speaker.tract_scale * f.center_hz *
        (1.0 + 0.08 * std::sin(kTwoPi * f.drift_rate_hz * t + f.drift_phase));
    const double z = (hz - center) / f.width_hz;
    amp += f.gain * std::exp(-0.5 * z * z);
  }
  return amp;
}

AudioSignal SynthesizeGenuine(const SpeakerTraits& speaker,
                              const PhraseTraits& phrase, double seconds,
                              uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = static_cast<int>(std::lround(seconds * kSampleRate));
  const double vibrato_phase = Uniform(rng, 0.0, kTwoPi);
  const double syllable_phase = Uniform(rng, 0.0, kTwoPi);
  const double tilt_db = Uniform(rng, kTiltMinDb, kTiltMaxDb);
  std::array<RipplePoint, kSessionBumps> session;
  for (auto& b : session)
    b = {Uniform(rng, 0.0, kNyquistHz),
         Uniform(rng, -kSessionBumpDb, kSessionBumpDb)};
  const double mic_low_hz = Uniform(rng, 50.0, 300.0);
  const double mic_high_hz = Uniform(rng, 7200.0, 8000.0);
  auto coloration = [&](double hz) {
    const double band = 1.0 / ((1.0 + std::pow(mic_low_hz / hz, 8.0)) *
                               (1.0 + std::pow(hz / mic_high_hz, 8.0)));
    double db = tilt_db * hz / kNyquistHz;
    for (const auto& b : session) {
      const double z = (hz - b.center_hz) / kSessionBumpWidthHz;
      db += b.gain_db * std::exp(-0.5 * z * z);
    }
    return band * std::pow(10.0, db / 20.0);
  };
  const int max_harmonics =
      static_cast<int>(kNyquistHz / (speaker.f0_hz * 0.9)) + 1;
  std::vector<double> harmonic_phase(max_harmonics);
  for (double& p : harmonic_phase) p = Uniform(rng, 0.0, kTwoPi);

  AudioSignal sig;
  sig.sample_rate = kSampleRate;
  sig.samples.assign(n, 0.0);
  std::vector<double> amps(max_harmonics);
  double phase = 0.0;
  for (int start = 0; start < n; start += kEnvelopeBlock) {
    const double t = static_cast<double>(start) / kSampleRate;
    const double f0 =
        speaker.f0_hz * (1.0 + 0.06 * std::sin(kTwoPi * 0.7 * t + vibrato_phase));
    const double loudness =
        0.55 + 0.45 * std::sin(kTwoPi * phrase.syllable_rate_hz * t +
                               syllable_phase);
    for (int h = 1; h <= max_harmonics; ++h) {
      const double hz = h * f0;
      amps[h - 1] = hz < kNyquistHz - 100.0
                        ? loudness * coloration(hz) *
                              Envelope(phrase, speaker, hz, t)
                        : 0.0;
    }
    const int stop = std::min(n, start + kEnvelopeBlock);
    for (int i = start; i < stop; ++i) {
      phase += kTwoPi * f0 / kSampleRate;
      double acc = 0.0;
      for (int h = 1; h <= max_harmonics; ++h)
        if (amps[h - 1] > 0.0)
          acc += amps[h - 1] * std::sin(h * phase + harmonic_phase[h - 1]);
      sig.samples[i] = acc;
    }
    phase = std::fmod(phase, kTwoPi);
  }

  const double rms = Rms(sig.samples);
  const double gain = rms > 0.0 ? kGenuineRms / rms : 0.0;
  std::normal_distribution<double> noise(
      0.0, kGenuineRms * std::pow(10.0, -kGenuineSnrDb / 20.0));
  for (double& v : sig.samples) v = v * gain + noise(rng);
  LimitPeak(sig.samples);
  return sig;
}

DeviceProfile DrawDevice(std::string id, std::mt19937_64& rng) {
  DeviceProfile d;
  d.device_id = std::move(id);
  d.low_cutoff_hz = Uniform(rng, 50.0, 300.0);
  // Top of the allowed [6000, 7500] range so the shared shelf stays the
  // dominant high-band effect.
  d.high_cutoff_hz = Uniform(rng, 7200.0, 7500.0);
  const int n_ripple = 4;
  for (int i = 0; i < n_ripple; ++i) {
    // One bump per quarter of the 0-4 kHz region.
    const double lo = 100.0 + i * 950.0;
    d.ripple.push_back({Uniform(rng, lo, lo + 950.0), Uniform(rng, -6.0, 6.0)});
  }
  d.snr_db = Uniform(rng, 30.0, 40.0);
  return d;
}

}  // namespace

uint64_t DeriveSeed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void ValidateDeviceProfile(const DeviceProfile& p) {
  auto bad = [&](const std::string& why) {
    Fail(ErrorCode::kInvalidArgument,
         "device '" + p.device_id + "': " + why);
  };
  if (p.device_id.empty() || p.device_id == kNoDevice) bad("invalid id");
  if (!(p.low_cutoff_hz >= 50.0 && p.low_cutoff_hz <= 300.0))
    bad("low_cutoff_hz outside [50, 300]");
  if (!(p.high_cutoff_hz >= 6000.0 && p.high_cutoff_hz <= 7500.0))
    bad("high_cutoff_hz outside [6000, 7500]");
  for (const auto& r : p.ripple) {
    if (!(r.center_hz >= 0.0 && r.center_hz < 4000.0))
      bad("ripple center must lie below 4000 Hz");
    if (!(std::abs(r.gain_db) <= 6.0)) bad("ripple gain exceeds 6 dB");
  }
  if (!(p.snr_db >= 20.0 && p.snr_db <= 40.0)) bad("snr_db outside [20, 40]");
}

double ChannelMagnitude(const DeviceProfile& p, double hz) {
  if (hz <= 0.0) return 0.0;
  const double lo = std::pow(p.low_cutoff_hz / hz, 8.0);
  const double hi = std::pow(hz / p.high_cutoff_hz, 8.0);
  double gain_db = 0.0;
  for (const auto& r : p.ripple) {
    const double z = (hz - r.center_hz) / kRippleWidthHz;
    gain_db += r.gain_db * std::exp(-0.5 * z * z);
  }
  if (hz >= kReplayShelfHz) gain_db += kReplayShelfDb;
  return std::pow(10.0, gain_db / 20.0) / ((1.0 + lo) * (1.0 + hi));
}

AudioSignal ApplyReplayChannel(const AudioSignal& signal,
                               const DeviceProfile& profile, uint64_t seed) {
  ValidateDeviceProfile(profile);
  AudioSignal out;
  out.sample_rate = signal.sample_rate;
  const size_t n = signal.samples.size();
  out.samples.assign(n, 0.0);
  if (n == 0) return out;

  // Zero-padding to twice the length keeps the circular convolution tail
  // out of the kept region for all but very long responses.
  const int n_fft = NextPowerOfTwo(2 * static_cast<long long>(n));
  RealFft fft(n_fft);
  std::vector<std::complex<double>> spec(fft.num_bins());
  fft.Forward(signal.samples, spec);
  for (int k = 0; k < fft.num_bins(); ++k)
    spec[k] *= ChannelMagnitude(profile,
                                static_cast<double>(k) * signal.sample_rate / n_fft);
  std::vector<double> time(n_fft);
  fft.Inverse(spec, time);
  for (size_t i = 0; i < n; ++i) out.samples[i] = time[i] / n_fft;

  const double sigma =
      Rms(signal.samples) * std::pow(10.0, -profile.snr_db / 20.0);
  if (sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    for (double& v : out.samples) v += noise(rng);
  }
  LimitPeak(out.samples);
  return out;
}

nlohmann::json DeviceProfilesToJson(const std::vector<DeviceProfile>& devices) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& d : devices) {
    nlohmann::json ripple = nlohmann::json::array();
    for (const auto& r : d.ripple) ripple.push_back({r.center_hz, r.gain_db});
    doc.push_back({{"device_id", d.device_id},
                   {"low_cutoff_hz", d.low_cutoff_hz},
                   {"high_cutoff_hz", d.high_cutoff_hz},
                   {"ripple", ripple},
                   {"snr_db", d.snr_db}});
  }
  return doc;
}

std::vector<DeviceProfile> DeviceProfilesFromJson(const nlohmann::json& doc) {
  std::vector<DeviceProfile> out;
  try {
    for (const auto& j : doc) {
      DeviceProfile d;
      d.device_id = j.at("device_id").get<std::string>();
      d.low_cutoff_hz = j.at("low_cutoff_hz").get<double>();
      d.high_cutoff_hz = j.at("high_cutoff_hz").get<double>();
      for (const auto& r : j.at("ripple"))
        d.ripple.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
      d.snr_db = j.at("snr_db").get<double>();
      ValidateDeviceProfile(d);
      out.push_back(std::move(d));
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kUnsupportedFormat,
         std::string("device profile JSON: ") + e.what());
  }
  return out;
}

void ValidateSynthConfig(const SynthConfig& c) {
  if (c.n_speakers < 1 || c.n_phrases < 1 || c.n_train_devices < 1 ||
      c.n_heldout_devices < 0 || c.reps < 1)
    Fail(ErrorCode::kInvalidConfig,
         "speaker, phrase, train-device and rep counts must be >= 1");
  if (!(c.utt_seconds >= 0.5 && c.utt_seconds <= 10.0))
    Fail(ErrorCode::kInvalidConfig, "utt_seconds must lie in [0.5, 10]");
  if (c.n_speakers > 100 || c.n_phrases > 100 || c.n_train_devices > 100 ||
      c.n_heldout_devices > 100)
    Fail(ErrorCode::kInvalidConfig, "counts above 100 are not supported");
}

SynthCorpus SynthesizeCorpus(const SynthConfig& config, uint64_t seed) {
  ValidateSynthConfig(config);
  std::mt19937_64 rng(DeriveSeed(seed, 0));

  std::vector<SpeakerTraits> speakers(config.n_speakers);
  for (auto& s : speakers) {
    s.f0_hz = Uniform(rng, 100.0, 250.0);
    s.tract_scale = Uniform(rng, 0.9, 1.1);
  }
  std::vector<PhraseTraits> phrases(config.n_phrases);
  for (auto& p : phrases) {
    const double lo[3] = {250.0, 900.0, 2200.0};
    const double hi[3] = {900.0, 2200.0, 3500.0};
    const double gain_lo[3] = {1.0, 0.5, 0.3};
    const double gain_hi[3] = {1.0, 0.9, 0.7};
    for (int j = 0; j < 3; ++j) {
      p.formants[j] = {Uniform(rng, lo[j], hi[j]), Uniform(rng, 80.0, 250.0),
                       Uniform(rng, gain_lo[j], gain_hi[j]),
                       Uniform(rng, 0.5, 2.0), Uniform(rng, 0.0, kTwoPi)};
    }
    p.syllable_rate_hz = Uniform(rng, 3.0, 5.0);
  }

  SynthCorpus corpus;
  for (int i = 0; i < config.n_train_devices; ++i)
    corpus.devices.push_back(DrawDevice(Indexed('D', i), rng));
  for (int i = 0; i < config.n_heldout_devices; ++i)
    corpus.devices.push_back(DrawDevice(Indexed('H', i), rng));

  const size_t n_genuine =
      static_cast<size_t>(config.n_speakers) * config.n_phrases * config.reps;
  uint64_t stream = 1;
  for (int s = 0; s < config.n_speakers; ++s) {
    for (int p = 0; p < config.n_phrases; ++p) {
      for (int r = 0; r < config.reps; ++r) {
        UtteranceMeta m;
        m.utt_id = "gen_" + Indexed('S', s) + "_" + Indexed('P', p) + "_r" +
                   std::to_string(r);
        m.audio_path = "wav/" + m.utt_id + ".wav";
        m.label = Label::kGenuine;
        m.speaker_id = Indexed('S', s);
        m.phrase_id = Indexed('P', p);
        corpus.manifest.records.push_back(std::move(m));
        corpus.signals.push_back(SynthesizeGenuine(
            speakers[s], phrases[p], config.utt_seconds,
            DeriveSeed(seed, stream++)));
      }
    }
  }
  for (size_t g = 0; g < n_genuine; ++g) {
    for (const auto& device : corpus.devices) {
      const UtteranceMeta& src = corpus.manifest.records[g];
      UtteranceMeta m = src;
      m.utt_id = "rep" + src.utt_id.substr(3) + "_" + device.device_id;
      m.audio_path = "wav/" + m.utt_id + ".wav";
      m.label = Label::kReplay;
      m.device_id = device.device_id;
      corpus.manifest.records.push_back(std::move(m));
      corpus.signals.push_back(ApplyReplayChannel(
          corpus.signals[g], device, DeriveSeed(seed, stream++)));
    }
  }
  return corpus;
}

int SynthRepIndex(std::string_view utt_id) {
  const size_t pos = utt_id.find("_r");
  if (pos == std::string_view::npos) return -1;
  int value = 0;
  size_t i = pos + 2;
  if (i >= utt_id.size() || !std::isdigit(static_cast<unsigned char>(utt_id[i])))
    return -1;
  while (i < utt_id.size() && std::isdigit(static_cast<unsigned char>(utt_id[i])))
    value = value * 10 + (utt_id[i++] - '0');
  return value;
}

void WriteCorpus(const SynthCorpus& corpus, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "wav", ec);
  if (ec) Fail(ErrorCode::kIoError, "cannot create " + (dir / "wav").string());
  for (size_t i = 0; i < corpus.signals.size(); ++i)
    WriteWav(corpus.signals[i], dir / corpus.manifest.records[i].audio_path);
  WriteManifest(corpus.manifest, dir / "manifest.tsv");
  std::ofstream out(dir / "devices.json", std::ios::binary);
  if (!out) Fail(ErrorCode::kIoError, "cannot write devices.json");
  out << DeviceProfilesToJson(corpus.devices).dump(2) << '\n';
}

}  // namespace replaycm
