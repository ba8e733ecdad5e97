#pragma once

namespace gmee {

/// Gaussian window G_sigma(x) = exp(-x^2 / (2 sigma^2)) / (sqrt(2 pi) sigma).
/// Throws InvalidParameter for sigma <= 0.
double gaussian_kernel(double x, double sigma);

/// Generalized Gaussian density kernel
///
///   G(e) = alpha / (2 beta Gamma(1/alpha)) * exp(-|e / beta|^alpha)
///
/// alpha = 2 is a Gaussian with sigma = beta / sqrt(2), alpha = 1 the Laplace
/// density. Shapes below 1 are rejected because the filter gradient carries
/// |e|^(alpha - 1), which is singular at zero for alpha < 1.
class GgdKernel {
 public:
  GgdKernel(double alpha, double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double norm_const() const noexcept { return norm_const_; }
  /// beta^alpha, the scale that appears in the gradient normalization.
  double beta_pow_alpha() const noexcept { return beta_pow_alpha_; }

  void set_alpha(double alpha);
  void set_beta(double beta);

  /// Density value at x.
  double operator()(double x) const noexcept;

  /// G(x) |x|^(alpha-1) sign(x), the per-pair factor of the entropy gradient.
  /// Exactly zero at x = 0 for every alpha >= 1.
  double influence(double x) const noexcept;

  bool operator==(const GgdKernel& other) const noexcept {
    return alpha_ == other.alpha_ && beta_ == other.beta_;
  }

 private:
  void refresh();

  double alpha_;
  double beta_;
  double norm_const_ = 0.0;
  double beta_pow_alpha_ = 0.0;
};

}  // namespace gmee
