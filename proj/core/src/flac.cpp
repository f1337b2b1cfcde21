#include "dialkit/flac.hpp"

#include <cstring>
#include <string>
#include <vector>

#include "dialkit/error.hpp"

namespace dialkit::audio {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw Error(ErrorCode::UndecodableAudio, "FLAC: " + what);
}

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t read(unsigned n) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < n; ++i) v = (v << 1) | bit();
    return v;
  }

  std::int64_t read_signed(unsigned n) {
    if (n == 0) return 0;
    const std::uint64_t v = read(n);
    const std::uint64_t sign = std::uint64_t{1} << (n - 1);
    return static_cast<std::int64_t>(v ^ sign) - static_cast<std::int64_t>(sign);
  }

  std::uint64_t read_unary() {
    std::uint64_t zeros = 0;
    while (bit() == 0) ++zeros;
    return zeros;
  }

  unsigned bit() {
    if (pos_ >= bytes_.size() * 8) fail("unexpected end of stream");
    const unsigned b = (bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1u;
    ++pos_;
    return b;
  }

  void align() { pos_ = (pos_ + 7) / 8 * 8; }
  std::size_t byte_pos() const { return pos_ / 8; }
  void seek_byte(std::size_t byte) { pos_ = byte * 8; }
  bool at_end() const { return pos_ >= bytes_.size() * 8; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::uint8_t crc8(std::span<const std::uint8_t> data) {
  std::uint8_t crc = 0;
  for (std::uint8_t byte : data) {
    crc ^= byte;
    for (int i = 0; i < 8; ++i) crc = static_cast<std::uint8_t>((crc & 0x80) ? (crc << 1) ^ 0x07 : crc << 1);
  }
  return crc;
}

std::uint16_t crc16(std::span<const std::uint8_t> data) {
  std::uint16_t crc = 0;
  for (std::uint8_t byte : data) {
    crc ^= static_cast<std::uint16_t>(byte << 8);
    for (int i = 0; i < 8; ++i) {
      crc = static_cast<std::uint16_t>((crc & 0x8000) ? (crc << 1) ^ 0x8005 : crc << 1);
    }
  }
  return crc;
}

struct StreamInfo {
  std::uint32_t sample_rate = 0;
  unsigned channels = 0;
  unsigned bits = 0;
  std::uint64_t total_samples = 0;
};

void read_residual(BitReader& br, unsigned block_size, unsigned order, std::int64_t* out) {
  const unsigned method = static_cast<unsigned>(br.read(2));
  if (method > 1) fail("reserved residual coding method");
  const unsigned param_bits = method == 0 ? 4 : 5;
  const unsigned escape = method == 0 ? 0xF : 0x1F;
  const unsigned partition_order = static_cast<unsigned>(br.read(4));
  const unsigned partitions = 1u << partition_order;
  if (block_size % partitions != 0 || (block_size >> partition_order) < order) {
    fail("invalid residual partition order");
  }
  std::size_t i = 0;
  for (unsigned p = 0; p < partitions; ++p) {
    const unsigned count = (block_size >> partition_order) - (p == 0 ? order : 0);
    const unsigned param = static_cast<unsigned>(br.read(param_bits));
    if (param == escape) {
      const unsigned raw_bits = static_cast<unsigned>(br.read(5));
      for (unsigned k = 0; k < count; ++k) out[i++] = br.read_signed(raw_bits);
    } else {
      for (unsigned k = 0; k < count; ++k) {
        const std::uint64_t q = br.read_unary();
        const std::uint64_t folded = (q << param) | br.read(param);
        out[i++] = static_cast<std::int64_t>(folded >> 1) ^ -static_cast<std::int64_t>(folded & 1);
      }
    }
  }
}

void read_subframe(BitReader& br, unsigned block_size, unsigned bps, std::vector<std::int64_t>& s) {
  s.assign(block_size, 0);
  if (br.bit() != 0) fail("subframe padding bit set");
  const unsigned type = static_cast<unsigned>(br.read(6));
  unsigned wasted = 0;
  if (br.bit()) wasted = static_cast<unsigned>(br.read_unary()) + 1;
  if (wasted >= bps) fail("wasted bits exceed sample size");
  bps -= wasted;

  if (type == 0) {
    const std::int64_t v = br.read_signed(bps);
    for (auto& x : s) x = v;
  } else if (type == 1) {
    for (auto& x : s) x = br.read_signed(bps);
  } else if (type >= 8 && type <= 12) {
    const unsigned order = type - 8;
    if (order > block_size) fail("fixed predictor order exceeds block size");
    for (unsigned i = 0; i < order; ++i) s[i] = br.read_signed(bps);
    read_residual(br, block_size, order, s.data() + order);
    for (unsigned i = order; i < block_size; ++i) {
      switch (order) {
        case 1: s[i] += s[i - 1]; break;
        case 2: s[i] += 2 * s[i - 1] - s[i - 2]; break;
        case 3: s[i] += 3 * s[i - 1] - 3 * s[i - 2] + s[i - 3]; break;
        case 4: s[i] += 4 * s[i - 1] - 6 * s[i - 2] + 4 * s[i - 3] - s[i - 4]; break;
        default: break;
      }
    }
  } else if (type >= 32) {
    const unsigned order = (type & 0x1F) + 1;
    if (order > block_size) fail("LPC order exceeds block size");
    for (unsigned i = 0; i < order; ++i) s[i] = br.read_signed(bps);
    const unsigned precision = static_cast<unsigned>(br.read(4)) + 1;
    if (precision == 16) fail("invalid LPC coefficient precision");
    const std::int64_t shift = br.read_signed(5);
    if (shift < 0) fail("negative LPC shift");
    std::vector<std::int64_t> coefs(order);
    for (auto& c : coefs) c = br.read_signed(precision);
    read_residual(br, block_size, order, s.data() + order);
    for (unsigned i = order; i < block_size; ++i) {
      std::int64_t acc = 0;
      for (unsigned j = 0; j < order; ++j) acc += coefs[j] * s[i - j - 1];
      s[i] += acc >> shift;
    }
  } else {
    fail("reserved subframe type " + std::to_string(type));
  }

  if (wasted) {
    for (auto& x : s) x *= std::int64_t{1} << wasted;
  }
}

// UTF-8-style coded frame/sample number; value is not needed.
void skip_coded_number(BitReader& br) {
  const unsigned first = static_cast<unsigned>(br.read(8));
  unsigned extra = 0;
  if ((first & 0x80) == 0) extra = 0;
  else if ((first & 0xE0) == 0xC0) extra = 1;
  else if ((first & 0xF0) == 0xE0) extra = 2;
  else if ((first & 0xF8) == 0xF0) extra = 3;
  else if ((first & 0xFC) == 0xF8) extra = 4;
  else if ((first & 0xFE) == 0xFC) extra = 5;
  else if (first == 0xFE) extra = 6;
  else fail("bad coded frame number");
  for (unsigned i = 0; i < extra; ++i) {
    if ((br.read(8) & 0xC0) != 0x80) fail("bad coded frame number continuation");
  }
}

}  // namespace

PcmAudio decode_flac(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  // Tolerate a leading ID3v2 tag.
  if (bytes.size() >= 10 && std::memcmp(bytes.data(), "ID3", 3) == 0) {
    const std::size_t tag = (std::size_t{bytes[6]} << 21) | (std::size_t{bytes[7]} << 14) |
                            (std::size_t{bytes[8]} << 7) | bytes[9];
    pos = 10 + tag;
  }
  if (bytes.size() < pos + 4 || std::memcmp(bytes.data() + pos, "fLaC", 4) != 0) {
    fail("missing fLaC marker");
  }
  pos += 4;

  StreamInfo info;
  bool have_info = false;
  for (bool last = false; !last;) {
    if (pos + 4 > bytes.size()) fail("truncated metadata block header");
    last = (bytes[pos] & 0x80) != 0;
    const unsigned type = bytes[pos] & 0x7F;
    const std::size_t len = (std::size_t{bytes[pos + 1]} << 16) | (std::size_t{bytes[pos + 2]} << 8) |
                            bytes[pos + 3];
    pos += 4;
    if (pos + len > bytes.size()) fail("truncated metadata block");
    if (type == 0) {
      if (len < 34) fail("short STREAMINFO");
      BitReader br(bytes.subspan(pos, len));
      br.read(16);  // min block size
      br.read(16);  // max block size
      br.read(24);
      br.read(24);
      info.sample_rate = static_cast<std::uint32_t>(br.read(20));
      info.channels = static_cast<unsigned>(br.read(3)) + 1;
      info.bits = static_cast<unsigned>(br.read(5)) + 1;
      info.total_samples = br.read(36);
      have_info = true;
    }
    pos += len;
  }
  if (!have_info) fail("missing STREAMINFO");
  if (info.sample_rate == 0) fail("zero sample rate");

  std::vector<std::vector<std::int64_t>> decoded(info.channels);
  std::vector<std::vector<std::int64_t>> block(info.channels);

  BitReader br(bytes);
  br.seek_byte(pos);
  while (pos + 2 <= bytes.size()) {
    const std::size_t frame_start = pos;
    br.seek_byte(pos);
    if (br.read(15) != 0x7FFC) fail("lost frame sync at byte " + std::to_string(pos));
    br.read(1);  // blocking strategy
    const unsigned bs_code = static_cast<unsigned>(br.read(4));
    const unsigned sr_code = static_cast<unsigned>(br.read(4));
    const unsigned ch_code = static_cast<unsigned>(br.read(4));
    const unsigned ss_code = static_cast<unsigned>(br.read(3));
    if (br.read(1) != 0) fail("reserved frame header bit set");
    skip_coded_number(br);

    unsigned block_size = 0;
    if (bs_code == 0) fail("reserved block size code");
    else if (bs_code == 1) block_size = 192;
    else if (bs_code <= 5) block_size = 576u << (bs_code - 2);
    else if (bs_code == 6) block_size = static_cast<unsigned>(br.read(8)) + 1;
    else if (bs_code == 7) block_size = static_cast<unsigned>(br.read(16)) + 1;
    else block_size = 256u << (bs_code - 8);

    if (sr_code == 12) br.read(8);
    else if (sr_code == 13 || sr_code == 14) br.read(16);
    else if (sr_code == 15) fail("invalid sample rate code");

    unsigned bps = info.bits;
    switch (ss_code) {
      case 0: break;
      case 1: bps = 8; break;
      case 2: bps = 12; break;
      case 4: bps = 16; break;
      case 5: bps = 20; break;
      case 6: bps = 24; break;
      case 7: bps = 32; break;
      default: fail("reserved sample size code");
    }
    if (bps != info.bits) fail("frame sample size differs from STREAMINFO");

    const std::size_t header_end = br.byte_pos();
    const unsigned header_crc = static_cast<unsigned>(br.read(8));
    if (header_crc != crc8(bytes.subspan(frame_start, header_end - frame_start))) {
      fail("frame header CRC mismatch");
    }

    unsigned channels = 0;
    if (ch_code <= 7) channels = ch_code + 1;
    else if (ch_code <= 10) channels = 2;
    else fail("reserved channel assignment");
    if (channels != info.channels) fail("frame channel count differs from STREAMINFO");

    for (unsigned c = 0; c < channels; ++c) {
      const bool side = (ch_code == 8 && c == 1) || (ch_code == 9 && c == 0) ||
                        (ch_code == 10 && c == 1);
      read_subframe(br, block_size, bps + (side ? 1 : 0), block[c]);
    }
    br.align();
    const std::size_t body_end = br.byte_pos();
    const unsigned frame_crc = static_cast<unsigned>(br.read(16));
    if (frame_crc != crc16(bytes.subspan(frame_start, body_end - frame_start))) {
      fail("frame CRC mismatch");
    }
    pos = br.byte_pos();

    if (ch_code >= 8) {
      auto& a = block[0];
      auto& b = block[1];
      for (unsigned i = 0; i < block_size; ++i) {
        if (ch_code == 8) {  // left, side
          b[i] = a[i] - b[i];
        } else if (ch_code == 9) {  // side, right
          a[i] = a[i] + b[i];
        } else {  // mid, side
          const std::int64_t side = b[i];
          const std::int64_t mid = (a[i] * 2) | (side & 1);
          a[i] = (mid + side) >> 1;
          b[i] = (mid - side) >> 1;
        }
      }
    }
    for (unsigned c = 0; c < channels; ++c) {
      decoded[c].insert(decoded[c].end(), block[c].begin(), block[c].end());
    }
  }

  std::size_t frames = decoded[0].size();
  if (info.total_samples != 0 && info.total_samples != frames) {
    throw Error(ErrorCode::SpecMismatch, "FLAC: STREAMINFO declares " +
                                             std::to_string(info.total_samples) +
                                             " samples, stream holds " + std::to_string(frames));
  }

  PcmAudio out;
  out.spec = AudioSpec{info.sample_rate, static_cast<std::uint16_t>(info.channels),
                       static_cast<std::uint16_t>(info.bits)};
  const double scale = 1.0 / static_cast<double>(std::int64_t{1} << (info.bits - 1));
  out.samples.resize(frames * info.channels);
  for (std::size_t i = 0; i < frames; ++i) {
    for (unsigned c = 0; c < info.channels; ++c) {
      out.samples[i * info.channels + c] = static_cast<double>(decoded[c][i]) * scale;
    }
  }
  return out;
}

}  // namespace dialkit::audio
