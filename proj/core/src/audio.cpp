#include "dialkit/audio.hpp"

#include <cmath>
#include <cstring>
#include <limits>

#include "dialkit/error.hpp"
#include "dialkit/flac.hpp"
#include "dialkit/resampler.hpp"
#include "dialkit/tsv.hpp"
#include "dialkit/wav.hpp"

namespace dialkit::audio {

double Duration::seconds() const {
  return sample_rate ? static_cast<double>(samples) / sample_rate : 0.0;
}

std::int64_t Duration::milliseconds() const {
  if (sample_rate == 0) return 0;
  return (samples * 1000 + sample_rate / 2) / sample_rate;
}

std::string Duration::to_string() const {
  const std::int64_t ms = milliseconds();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld.%03lld", static_cast<long long>(ms / 1000),
                static_cast<long long>(ms % 1000));
  return buf;
}

PcmAudio decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), "RIFF", 4) == 0) return decode_wav(bytes);
  if ((bytes.size() >= 4 && std::memcmp(bytes.data(), "fLaC", 4) == 0) ||
      (bytes.size() >= 3 && std::memcmp(bytes.data(), "ID3", 3) == 0)) {
    return decode_flac(bytes);
  }
  throw Error(ErrorCode::UndecodableAudio, "unrecognized container");
}

PcmAudio decode_file(const std::filesystem::path& path) {
  const std::string bytes = io::read_file(path);
  try {
    return decode(std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

void check_consistent(const PcmAudio& audio) {
  if (audio.spec.channels == 0 || audio.spec.sample_rate == 0) {
    throw Error(ErrorCode::SpecMismatch, "spec has zero channels or sample rate");
  }
  if (audio.samples.size() % audio.spec.channels != 0) {
    throw Error(ErrorCode::SpecMismatch,
                std::to_string(audio.samples.size()) + " samples is not a whole number of " +
                    std::to_string(audio.spec.channels) + "-channel frames");
  }
}

PcmAudio downmix(const PcmAudio& audio) {
  check_consistent(audio);
  const std::size_t ch = audio.spec.channels;
  PcmAudio out;
  out.spec = AudioSpec{audio.spec.sample_rate, 1, audio.spec.bit_depth};
  if (ch == 1) {
    out.samples = audio.samples;
    return out;
  }
  const std::size_t frames = audio.frames();
  out.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double sum = 0.0;
    for (std::size_t c = 0; c < ch; ++c) sum += audio.samples[i * ch + c];
    out.samples[i] = sum / static_cast<double>(ch);
  }
  return out;
}

std::vector<std::pair<std::string, PcmAudio>> split_channels(const PcmAudio& audio,
                                                             const ChannelMap* channel_map) {
  check_consistent(audio);
  if (channel_map == nullptr || channel_map->empty()) {
    throw Error(ErrorCode::MissingChannelMap, "per-channel split requires a channel map");
  }
  if (audio.spec.channels != 2) {
    throw Error(ErrorCode::ChannelCountMismatch,
                "expected 2 channels, got " + std::to_string(audio.spec.channels));
  }
  const std::size_t ch = audio.spec.channels;
  const std::size_t frames = audio.frames();
  std::vector<std::pair<std::string, PcmAudio>> out;
  for (const auto& [index, speaker] : *channel_map) {
    if (index >= ch) {
      throw Error(ErrorCode::ChannelCountMismatch,
                  "channel map index " + std::to_string(index) + " >= channel count");
    }
    PcmAudio mono;
    mono.spec = AudioSpec{audio.spec.sample_rate, 1, audio.spec.bit_depth};
    mono.samples.resize(frames);
    for (std::size_t i = 0; i < frames; ++i) mono.samples[i] = audio.samples[i * ch + index];
    out.emplace_back(speaker, std::move(mono));
  }
  return out;
}

PcmAudio slice_frames(const PcmAudio& audio, std::size_t first_frame, std::size_t frame_count) {
  check_consistent(audio);
  const std::size_t frames = audio.frames();
  first_frame = std::min(first_frame, frames);
  frame_count = std::min(frame_count, frames - first_frame);
  const std::size_t ch = audio.spec.channels;
  PcmAudio out;
  out.spec = audio.spec;
  out.samples.assign(audio.samples.begin() + static_cast<std::ptrdiff_t>(first_frame * ch),
                     audio.samples.begin() + static_cast<std::ptrdiff_t>((first_frame + frame_count) * ch));
  return out;
}

std::vector<std::int16_t> quantize_int16(std::span<const double> samples) {
  std::vector<std::int16_t> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double v = samples[i] * 32768.0;
    if (std::isnan(v)) v = 0.0;
    v = std::round(v);  // half away from zero
    if (v > 32767.0) v = 32767.0;
    if (v < -32768.0) v = -32768.0;
    out[i] = static_cast<std::int16_t>(v);
  }
  return out;
}

Int16Audio standardize_audio(const PcmAudio& source) {
  check_consistent(source);
  PcmAudio mono = source.spec.channels == 1 ? source : downmix(source);
  Int16Audio out;
  out.spec = kCanonicalSpec;
  if (mono.spec.sample_rate == kCanonicalSpec.sample_rate) {
    out.samples = quantize_int16(mono.samples);
  } else {
    const Resampler resampler(mono.spec.sample_rate, kCanonicalSpec.sample_rate);
    out.samples = quantize_int16(resampler.process(mono.samples));
  }
  return out;
}

Duration compute_duration(const PcmAudio& audio) {
  check_consistent(audio);
  return Duration{static_cast<std::int64_t>(audio.frames()), audio.spec.sample_rate};
}

Duration compute_duration(const Int16Audio& audio) {
  if (audio.spec.channels == 0 || audio.spec.sample_rate == 0) {
    throw Error(ErrorCode::UndecodableAudio, "spec has zero channels or sample rate");
  }
  return Duration{static_cast<std::int64_t>(audio.samples.size() / audio.spec.channels),
                  audio.spec.sample_rate};
}

}  // namespace dialkit::audio
