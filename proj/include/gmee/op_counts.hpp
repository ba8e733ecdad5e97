#pragma once

#include <cstdint>

namespace gmee {

/// Arithmetic tally: multiplications/divisions, additions/subtractions, and
/// transcendental evaluations (exp, pow).
struct OpCounts {
  std::uint64_t multiplications = 0;
  std::uint64_t additions = 0;
  std::uint64_t exponentiations = 0;

  OpCounts& operator+=(const OpCounts& other) noexcept {
    multiplications += other.multiplications;
    additions += other.additions;
    exponentiations += other.exponentiations;
    return *this;
  }

  bool operator==(const OpCounts&) const = default;
};

}  // namespace gmee
