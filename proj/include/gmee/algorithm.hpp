#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace gmee {

enum class AlgorithmKind { lms, lmf, gmcc, mee, gmee, qgmee, rls };

std::string_view to_string(AlgorithmKind kind) noexcept;
std::optional<AlgorithmKind> parse_algorithm(std::string_view name) noexcept;
std::span<const AlgorithmKind> all_algorithms() noexcept;

/// Flat, copyable description of one configured filter. Fields that an
/// algorithm does not use are ignored by it.
struct AlgorithmSpec {
  AlgorithmKind kind = AlgorithmKind::gmee;
  /// Column label in outputs; empty means the algorithm name.
  std::string label;
  double eta = 0.01;
  // entropy family
  double alpha = 2.0;
  double beta = 1.0;
  std::size_t window = 10;
  double gamma = 0.0;
  // GMCC
  double gmcc_shape = 4.0;
  double gmcc_lambda = 1.0;
  // RLS
  double forgetting = 0.999;
  double delta = 0.01;

  std::string display_name() const {
    return label.empty() ? std::string(to_string(kind)) : label;
  }
  bool uses_window() const noexcept {
    return kind == AlgorithmKind::mee || kind == AlgorithmKind::gmee ||
           kind == AlgorithmKind::qgmee;
  }

  bool operator==(const AlgorithmSpec&) const = default;
};

}  // namespace gmee
