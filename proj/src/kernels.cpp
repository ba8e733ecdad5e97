#include "gmee/kernels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gmee/error.hpp"
#include "gmee/special_functions.hpp"

namespace gmee {

double gaussian_kernel(double x, double sigma) {
  if (!(sigma > 0.0)) {
    throw InvalidParameter("gaussian_kernel: sigma must be positive, got " +
                           std::to_string(sigma));
  }
  const double z = x / sigma;
  return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * sigma);
}

namespace {

void check_shape(double alpha) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    throw InvalidParameter("GgdKernel: alpha must be >= 1, got " + std::to_string(alpha));
  }
}

void check_scale(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw InvalidParameter("GgdKernel: beta must be positive, got " + std::to_string(beta));
  }
}

}  // namespace

GgdKernel::GgdKernel(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  check_shape(alpha);
  check_scale(beta);
  refresh();
}

void GgdKernel::set_alpha(double alpha) {
  check_shape(alpha);
  alpha_ = alpha;
  refresh();
}

void GgdKernel::set_beta(double beta) {
  check_scale(beta);
  beta_ = beta;
  refresh();
}

void GgdKernel::refresh() {
  norm_const_ = alpha_ / (2.0 * beta_ * lanczos_gamma(1.0 / alpha_));
  beta_pow_alpha_ = std::pow(beta_, alpha_);
}

double GgdKernel::operator()(double x) const noexcept {
  return norm_const_ * std::exp(-std::pow(std::abs(x) / beta_, alpha_));
}

double GgdKernel::influence(double x) const noexcept {
  if (x == 0.0) {
    return 0.0;
  }
  const double a = std::abs(x);
  const double r = std::pow(a / beta_, alpha_);
  // |x|^(alpha-1) = r * beta^alpha / |x|, saves a second pow.
  const double magnitude = norm_const_ * std::exp(-r) * (r * beta_pow_alpha_ / a);
  return x > 0.0 ? magnitude : -magnitude;
}

}  // namespace gmee
