#include "dialkit/wav.hpp"

#include <cstring>
#include <optional>
#include <string>

#include "dialkit/error.hpp"
#include "dialkit/tsv.hpp"

namespace dialkit::audio {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

std::uint32_t le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

struct Format {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

}  // namespace

PcmAudio decode_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::UndecodableAudio, "not a RIFF/WAVE stream");
  }

  std::optional<Format> fmt;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + size > bytes.size()) {
        throw Error(ErrorCode::UndecodableAudio, "truncated fmt chunk");
      }
      Format f;
      const std::uint8_t* p = bytes.data() + body;
      f.tag = le16(p);
      f.channels = le16(p + 2);
      f.sample_rate = le32(p + 4);
      f.block_align = le16(p + 12);
      f.bits = le16(p + 14);
      if (f.tag == kFormatExtensible) {
        if (size < 40) throw Error(ErrorCode::UndecodableAudio, "short WAVE_FORMAT_EXTENSIBLE");
        f.tag = le16(p + 24);  // first two bytes of the sub-format GUID
      }
      fmt = f;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = size;
      if (body + data_size > bytes.size()) {
        throw Error(ErrorCode::SpecMismatch,
                    "data chunk declares " + std::to_string(data_size) + " bytes but only " +
                        std::to_string(bytes.size() - body) + " are present");
      }
      break;
    }
    pos = body + size + (size & 1);
  }

  if (!fmt) throw Error(ErrorCode::UndecodableAudio, "missing fmt chunk");
  if (!data) throw Error(ErrorCode::UndecodableAudio, "missing data chunk");
  const Format& f = *fmt;
  if (f.channels == 0 || f.sample_rate == 0) {
    throw Error(ErrorCode::UndecodableAudio, "zero channels or sample rate");
  }
  const bool is_float = f.tag == kFormatFloat;
  if (f.tag != kFormatPcm && !is_float) {
    throw Error(ErrorCode::UndecodableAudio, "unsupported WAVE format tag " + std::to_string(f.tag));
  }
  const bool supported = is_float ? (f.bits == 32 || f.bits == 64)
                                  : (f.bits == 8 || f.bits == 16 || f.bits == 24 || f.bits == 32);
  if (!supported) {
    throw Error(ErrorCode::UndecodableAudio, "unsupported bit depth " + std::to_string(f.bits));
  }
  const std::size_t bytes_per_sample = f.bits / 8;
  if (f.block_align != bytes_per_sample * f.channels) {
    throw Error(ErrorCode::SpecMismatch, "block align " + std::to_string(f.block_align) +
                                             " inconsistent with channels x bit depth");
  }
  if (data_size % f.block_align != 0) {
    throw Error(ErrorCode::SpecMismatch, "data chunk is not a whole number of frames");
  }

  PcmAudio out;
  out.spec = AudioSpec{f.sample_rate, f.channels, f.bits};
  const std::size_t count = data_size / bytes_per_sample;
  out.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint8_t* p = data + i * bytes_per_sample;
    double v = 0.0;
    if (is_float) {
      if (f.bits == 32) {
        float x;
        std::uint32_t raw = le32(p);
        std::memcpy(&x, &raw, 4);
        v = x;
      } else {
        std::uint64_t raw = static_cast<std::uint64_t>(le32(p)) |
                            (static_cast<std::uint64_t>(le32(p + 4)) << 32);
        std::memcpy(&v, &raw, 8);
      }
    } else {
      switch (f.bits) {
        case 8: v = (static_cast<int>(p[0]) - 128) / 128.0; break;
        case 16: v = static_cast<std::int16_t>(le16(p)) / 32768.0; break;
        case 24: {
          std::int32_t s = static_cast<std::int32_t>(p[0] | (p[1] << 8) | (p[2] << 16));
          if (s & 0x800000) s -= 0x1000000;
          v = s / 8388608.0;
          break;
        }
        case 32: v = static_cast<std::int32_t>(le32(p)) / 2147483648.0; break;
      }
    }
    out.samples[i] = v;
  }
  return out;
}

std::vector<std::uint8_t> encode_wav(const Int16Audio& audio) {
  const std::uint16_t channels = audio.spec.channels;
  const std::uint32_t rate = audio.spec.sample_rate;
  if (channels == 0 || rate == 0 || audio.spec.bit_depth != 16) {
    throw Error(ErrorCode::InvalidArgument, "encode_wav expects 16-bit audio with a valid spec");
  }
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(audio.samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put32(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, channels);
  put32(out, rate);
  put32(out, rate * channels * 2);
  put16(out, static_cast<std::uint16_t>(channels * 2));
  put16(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put32(out, data_bytes);
  for (std::int16_t s : audio.samples) put16(out, static_cast<std::uint16_t>(s));
  return out;
}

void write_wav(const std::filesystem::path& path, const Int16Audio& audio) {
  const auto bytes = encode_wav(audio);
  io::write_file(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace dialkit::audio
