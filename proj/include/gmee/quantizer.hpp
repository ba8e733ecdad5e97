#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gmee/kernels.hpp"

namespace gmee {

/// Result of online threshold quantization of a scalar error population.
struct Codebook {
  std::vector<double> centers;
  std::vector<std::size_t> counts;
  double gamma = 0.0;

  std::size_t size() const noexcept { return centers.size(); }
  /// Number of quantized samples, sum of counts.
  std::size_t total() const noexcept;
};

/// Online quantizer: each error joins its nearest existing center when that
/// center lies within gamma (ties go to the earlier center), otherwise it
/// opens a new center. Input order matters.
Codebook quantize(std::span<const double> errors, double gamma);

/// (1/L^2) sum_i sum_h H_h G(e_i - c_h). Throws ConsistencyError when the
/// codebook does not account for exactly L samples.
double quantized_ip(std::span<const double> errors, const Codebook& codebook,
                    const GgdKernel& kernel);

}  // namespace gmee
