#include "gmee/information_potential.hpp"

#include <cmath>
#include <string>

#include "gmee/error.hpp"

namespace gmee {

namespace {

void require_nonempty(std::span<const double> errors, const char* who) {
  if (errors.empty()) {
    throw InvalidInput(std::string(who) + ": error list is empty");
  }
}

}  // namespace

double parzen_pdf(std::span<const double> errors, const GgdKernel& kernel, double x) {
  require_nonempty(errors, "parzen_pdf");
  double sum = 0.0;
  for (double e : errors) {
    sum += kernel(x - e);
  }
  return sum / static_cast<double>(errors.size());
}

double quadratic_ip(std::span<const double> errors, double sigma) {
  require_nonempty(errors, "quadratic_ip");
  if (!(sigma > 0.0)) {
    throw InvalidParameter("quadratic_ip: sigma must be positive");
  }
  double sum = 0.0;
  for (double ei : errors) {
    for (double ej : errors) {
      sum += gaussian_kernel(ei - ej, sigma);
    }
  }
  const auto n = static_cast<double>(errors.size());
  return sum / (n * n);
}

double generalized_ip(std::span<const double> errors, const GgdKernel& kernel) {
  require_nonempty(errors, "generalized_ip");
  double sum = 0.0;
  for (double ei : errors) {
    for (double ej : errors) {
      sum += kernel(ei - ej);
    }
  }
  const auto n = static_cast<double>(errors.size());
  return sum / (n * n);
}

double renyi_entropy(double ip, double order) {
  if (!(ip > 0.0)) {
    throw InvalidParameter("renyi_entropy: information potential must be positive");
  }
  if (!(order > 0.0) || order == 1.0) {
    throw InvalidParameter("renyi_entropy: order must be positive and different from 1");
  }
  return std::log(ip) / (1.0 - order);
}

}  // namespace gmee
