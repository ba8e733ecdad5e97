#include "gmee/quantizer.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "gmee/error.hpp"

namespace gmee {

std::size_t Codebook::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

Codebook quantize(std::span<const double> errors, double gamma) {
  if (errors.empty()) {
    throw InvalidInput("quantize: error list is empty");
  }
  if (!(gamma >= 0.0)) {
    throw InvalidParameter("quantize: gamma must be nonnegative, got " + std::to_string(gamma));
  }
  Codebook book;
  book.gamma = gamma;
  book.centers.reserve(errors.size());
  book.counts.reserve(errors.size());
  for (double e : errors) {
    std::size_t nearest = 0;
    double best = INFINITY;
    for (std::size_t h = 0; h < book.centers.size(); ++h) {
      const double dist = std::abs(e - book.centers[h]);
      if (dist < best) {  // strict: earlier center wins ties
        best = dist;
        nearest = h;
      }
    }
    if (!book.centers.empty() && best <= gamma) {
      ++book.counts[nearest];
    } else {
      book.centers.push_back(e);
      book.counts.push_back(1);
    }
  }
  return book;
}

double quantized_ip(std::span<const double> errors, const Codebook& codebook,
                    const GgdKernel& kernel) {
  if (errors.empty()) {
    throw InvalidInput("quantized_ip: error list is empty");
  }
  if (codebook.total() != errors.size() || codebook.counts.size() != codebook.centers.size()) {
    throw ConsistencyError("quantized_ip: codebook accounts for " +
                           std::to_string(codebook.total()) + " samples but " +
                           std::to_string(errors.size()) + " errors were given");
  }
  double sum = 0.0;
  for (double e : errors) {
    for (std::size_t h = 0; h < codebook.size(); ++h) {
      sum += static_cast<double>(codebook.counts[h]) * kernel(e - codebook.centers[h]);
    }
  }
  const auto n = static_cast<double>(errors.size());
  return sum / (n * n);
}

}  // namespace gmee
