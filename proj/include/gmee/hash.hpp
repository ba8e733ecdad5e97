#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

namespace gmee {

/// 64-bit FNV-1a, used for configuration fingerprints and stream checksums.
class Fnv1a {
 public:
  void update(std::string_view bytes) noexcept {
    for (unsigned char c : bytes) {
      state_ = (state_ ^ c) * kPrime;
    }
  }
  void update(std::uint64_t word) noexcept {
    for (int k = 0; k < 8; ++k) {
      state_ = (state_ ^ ((word >> (8 * k)) & 0xffU)) * kPrime;
    }
  }
  void update(double value) noexcept { update(std::bit_cast<std::uint64_t>(value)); }

  std::uint64_t digest() const noexcept { return state_; }
  std::string hex() const;

 private:
  static constexpr std::uint64_t kPrime = 0x100000001b3ULL;
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace gmee
