#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dialkit::audio {

struct AudioSpec {
  std::uint32_t sample_rate = 0;
  std::uint16_t channels = 0;
  std::uint16_t bit_depth = 0;

  bool operator==(const AudioSpec&) const = default;
};

// mono, 16 kHz, 16-bit integer PCM
inline constexpr AudioSpec kCanonicalSpec{16000, 1, 16};

// Decoded audio. Samples are interleaved and scaled so that full-scale
// integer PCM maps onto [-1, 1); a 16-bit sample s is stored as s / 32768,
// which is exact in a double.
struct PcmAudio {
  AudioSpec spec;
  std::vector<double> samples;

  std::size_t frames() const { return spec.channels ? samples.size() / spec.channels : 0; }
};

// Canonical-form audio ready to be written as 16-bit PCM.
struct Int16Audio {
  AudioSpec spec;
  std::vector<std::int16_t> samples;  // interleaved
};

// Optional speaker assignment for per-channel conversational recordings.
using ChannelMap = std::map<std::uint16_t, std::string>;

struct Duration {
  std::int64_t samples = 0;
  std::uint32_t sample_rate = 0;

  double seconds() const;
  // Rounded half-up to whole milliseconds.
  std::int64_t milliseconds() const;
  // "1.000" style, millisecond precision.
  std::string to_string() const;
};

// Container sniffing: RIFF/WAVE or FLAC. Throws UndecodableAudio or
// SpecMismatch (declared vs. actual payload length).
PcmAudio decode(std::span<const std::uint8_t> bytes);
PcmAudio decode_file(const std::filesystem::path& path);

// Throws SpecMismatch when the sample count is not a whole number of frames
// or the spec is unusable.
void check_consistent(const PcmAudio& audio);

// Arithmetic mean across channels per frame, in double precision.
PcmAudio downmix(const PcmAudio& audio);

// One mono stream per mapped channel, ordered by channel index. The samples
// are the exact per-channel slices of the interleaved source.
// Throws MissingChannelMap or ChannelCountMismatch.
std::vector<std::pair<std::string, PcmAudio>> split_channels(const PcmAudio& audio,
                                                             const ChannelMap* channel_map);

// Frames [first_frame, first_frame + frame_count) clipped to the signal.
PcmAudio slice_frames(const PcmAudio& audio, std::size_t first_frame, std::size_t frame_count);

// Scale by 32768, round half away from zero, saturate at int16 limits.
std::vector<std::int16_t> quantize_int16(std::span<const double> samples);

// Downmix (if multichannel), resample to 16 kHz with the windowed-sinc
// resampler, quantize to 16 bits. Canonical input passes through
// bit-identically.
Int16Audio standardize_audio(const PcmAudio& source);

Duration compute_duration(const PcmAudio& audio);
Duration compute_duration(const Int16Audio& audio);

}  // namespace dialkit::audio
