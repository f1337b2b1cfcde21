#pragma once

#include <cstdint>
#include <span>

#include "dialkit/audio.hpp"

namespace dialkit::audio {

// Native FLAC stream decoder (fixed and LPC predictors, Rice residuals,
// inter-channel decorrelation). Frame CRC-8/CRC-16 are verified.
PcmAudio decode_flac(std::span<const std::uint8_t> bytes);

}  // namespace dialkit::audio
