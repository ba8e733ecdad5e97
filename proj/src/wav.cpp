#include "gmee/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "gmee/error.hpp"
#include "gmee/io.hpp"

namespace gmee {

namespace {

std::uint32_t read_u32(const std::string& b, std::size_t at) {
  std::uint32_t v = 0;
  for (int k = 3; k >= 0; --k) {
    v = (v << 8) | static_cast<unsigned char>(b[at + static_cast<std::size_t>(k)]);
  }
  return v;
}

std::uint16_t read_u16(const std::string& b, std::size_t at) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                    (static_cast<unsigned char>(b[at + 1]) << 8));
}

void put_u32(std::string& b, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) {
    b.push_back(static_cast<char>((v >> (8 * k)) & 0xffU));
  }
}

void put_u16(std::string& b, std::uint16_t v) {
  b.push_back(static_cast<char>(v & 0xffU));
  b.push_back(static_cast<char>((v >> 8) & 0xffU));
}

[[noreturn]] void unsupported(const std::string& field, const std::string& detail) {
  throw FormatError("unsupported WAV: field '" + field + "' " + detail);
}

}  // namespace

WavData wav_decode(const std::string& bytes) {
  if (bytes.size() < 12) {
    unsupported("RIFF", "missing (file holds " + std::to_string(bytes.size()) + " bytes)");
  }
  if (bytes.compare(0, 4, "RIFF") != 0) {
    unsupported("ChunkID", "is not 'RIFF'");
  }
  if (bytes.compare(8, 4, "WAVE") != 0) {
    unsupported("Format", "is not 'WAVE'");
  }
  WavData out;
  bool have_fmt = false;
  std::size_t at = 12;
  while (at + 8 <= bytes.size()) {
    const std::string id = bytes.substr(at, 4);
    const std::uint32_t size = read_u32(bytes, at + 4);
    const std::size_t body = at + 8;
    if (body + size > bytes.size()) {
      unsupported(id, "chunk size " + std::to_string(size) + " runs past end of file");
    }
    if (id == "fmt ") {
      if (size < 16) {
        unsupported("fmt ", "chunk is shorter than 16 bytes");
      }
      const std::uint16_t format = read_u16(bytes, body);
      const std::uint16_t channels = read_u16(bytes, body + 2);
      const std::uint16_t bits = read_u16(bytes, body + 14);
      if (format != 1) {
        unsupported("AudioFormat", "is " + std::to_string(format) + ", only PCM (1) is supported");
      }
      if (channels != 1) {
        unsupported("NumChannels", "is " + std::to_string(channels) + ", only mono is supported");
      }
      if (bits != 16) {
        unsupported("BitsPerSample", "is " + std::to_string(bits) + ", only 16 is supported");
      }
      out.sample_rate = read_u32(bytes, body + 4);
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) {
        unsupported("fmt ", "chunk missing before 'data'");
      }
      const std::size_t count = size / 2;
      out.samples.resize(count);
      for (std::size_t k = 0; k < count; ++k) {
        const auto raw = static_cast<std::int16_t>(read_u16(bytes, body + 2 * k));
        out.samples[k] = static_cast<double>(raw) / 32768.0;
      }
      return out;
    }
    at = body + size + (size & 1U);  // chunks are word aligned
  }
  unsupported("data", "chunk missing");
}

WavData wav_read(const std::filesystem::path& path) { return wav_decode(read_file(path)); }

std::string wav_encode(const WavData& data) {
  const auto count = static_cast<std::uint32_t>(data.samples.size());
  const std::uint32_t data_bytes = count * 2;
  std::string b;
  b.reserve(44 + data_bytes);
  b += "RIFF";
  put_u32(b, 36 + data_bytes);
  b += "WAVE";
  b += "fmt ";
  put_u32(b, 16);
  put_u16(b, 1);  // PCM
  put_u16(b, 1);  // mono
  put_u32(b, data.sample_rate);
  put_u32(b, data.sample_rate * 2);  // byte rate
  put_u16(b, 2);                     // block align
  put_u16(b, 16);
  b += "data";
  put_u32(b, data_bytes);
  for (double s : data.samples) {
    const double scaled = std::round(std::clamp(s, -1.0, 1.0) * 32768.0);
    const auto q = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    put_u16(b, static_cast<std::uint16_t>(q));
  }
  return b;
}

void wav_write(const std::filesystem::path& path, const WavData& data) {
  write_file_atomic(path, wav_encode(data));
}

}  // namespace gmee
