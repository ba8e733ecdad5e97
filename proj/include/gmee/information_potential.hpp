#pragma once

#include <span>

#include "gmee/kernels.hpp"

namespace gmee {

/// Parzen estimate (1/L) sum_i G(x - e_i).
double parzen_pdf(std::span<const double> errors, const GgdKernel& kernel, double x);

/// Quadratic information potential with a Gaussian window of width sigma.
double quadratic_ip(std::span<const double> errors, double sigma);

/// Information potential with a generalized Gaussian kernel:
/// (1/L^2) sum_i sum_j G(e_i - e_j). The double sum runs i-major, j-minor.
double generalized_ip(std::span<const double> errors, const GgdKernel& kernel);

/// Renyi entropy of order mu from an information potential value.
double renyi_entropy(double ip, double order);

}  // namespace gmee
