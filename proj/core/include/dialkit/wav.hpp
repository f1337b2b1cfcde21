#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dialkit/audio.hpp"

namespace dialkit::audio {

// RIFF/WAVE: integer PCM (8/16/24/32 bit), IEEE float (32/64 bit) and
// WAVE_FORMAT_EXTENSIBLE wrapping either.
PcmAudio decode_wav(std::span<const std::uint8_t> bytes);

// 16-bit little-endian PCM with a 44-byte header (fmt chunk of 16 bytes).
std::vector<std::uint8_t> encode_wav(const Int16Audio& audio);
void write_wav(const std::filesystem::path& path, const Int16Audio& audio);

}  // namespace dialkit::audio
