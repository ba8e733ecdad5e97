#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gmee {

/// 16-bit PCM mono audio mapped to [-1, 1).
struct WavData {
  std::uint32_t sample_rate = 16000;
  std::vector<double> samples;
};

/// Throws FormatError naming the offending header field for anything other
/// than 16-bit PCM mono.
WavData wav_read(const std::filesystem::path& path);
WavData wav_decode(const std::string& bytes);

/// Samples are clamped to the representable range and rounded to the
/// nearest 16-bit step. The file appears atomically (temp file + rename).
void wav_write(const std::filesystem::path& path, const WavData& data);
std::string wav_encode(const WavData& data);

}  // namespace gmee
