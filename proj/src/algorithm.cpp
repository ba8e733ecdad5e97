#include "gmee/algorithm.hpp"

#include <array>

namespace gmee {

namespace {

constexpr std::array<AlgorithmKind, 7> kAll = {
    AlgorithmKind::lms,  AlgorithmKind::lmf,   AlgorithmKind::gmcc, AlgorithmKind::mee,
    AlgorithmKind::gmee, AlgorithmKind::qgmee, AlgorithmKind::rls};

}  // namespace

std::string_view to_string(AlgorithmKind kind) noexcept {
  switch (kind) {
    case AlgorithmKind::lms: return "lms";
    case AlgorithmKind::lmf: return "lmf";
    case AlgorithmKind::gmcc: return "gmcc";
    case AlgorithmKind::mee: return "mee";
    case AlgorithmKind::gmee: return "gmee";
    case AlgorithmKind::qgmee: return "qgmee";
    case AlgorithmKind::rls: return "rls";
  }
  return "unknown";
}

std::optional<AlgorithmKind> parse_algorithm(std::string_view name) noexcept {
  for (AlgorithmKind kind : kAll) {
    if (to_string(kind) == name) {
      return kind;
    }
  }
  return std::nullopt;
}

std::span<const AlgorithmKind> all_algorithms() noexcept { return kAll; }

}  // namespace gmee
