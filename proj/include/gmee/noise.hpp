#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <variant>

#include <Eigen/Core>

namespace gmee {

/// Portable seeded generator. Raw bits come from std::mt19937_64, whose
/// output sequence is fixed by the C++ standard; the continuous variates are
/// derived here rather than through std::*_distribution, whose algorithms
/// differ between standard libraries:
///   uniform01 = (bits >> 11) * 2^-53
///   normal    = Box-Muller on two uniforms, second variate cached.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform01();
  /// Standard normal.
  double normal();
  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

struct GaussianNoise {
  double mean = 0.0;
  double variance = 1.0;
  bool operator==(const GaussianNoise&) const = default;
};

/// Zero-mean uniform law on [-sqrt(3 variance), sqrt(3 variance)].
struct UniformNoise {
  double variance = 1.0;
  bool operator==(const UniformNoise&) const = default;
};

/// (1 - p) N(0, variance_small) + p N(0, variance_large).
struct MixedGaussianNoise {
  double outlier_prob = 0.05;
  double variance_small = 0.01;
  double variance_large = 100.0;
  bool operator==(const MixedGaussianNoise&) const = default;
};

/// b (R - E[R]) with b ~ Bernoulli(spike_prob), R ~ Rayleigh(rayleigh_scale).
struct BernoulliRayleighNoise {
  double spike_prob = 0.3;
  double rayleigh_scale = 1.0;
  bool operator==(const BernoulliRayleighNoise&) const = default;
};

class NoiseModel {
 public:
  using Params = std::variant<GaussianNoise, UniformNoise, MixedGaussianNoise,
                              BernoulliRayleighNoise>;

  /// Validates parameters; throws InvalidParameter.
  explicit NoiseModel(Params params);
  NoiseModel() : NoiseModel(GaussianNoise{}) {}

  static NoiseModel gaussian(double mean, double variance) {
    return NoiseModel(GaussianNoise{mean, variance});
  }
  static NoiseModel uniform(double variance) { return NoiseModel(UniformNoise{variance}); }
  static NoiseModel mixed_gaussian(double p, double variance_small, double variance_large) {
    return NoiseModel(MixedGaussianNoise{p, variance_small, variance_large});
  }
  static NoiseModel bernoulli_rayleigh(double spike_prob, double scale) {
    return NoiseModel(BernoulliRayleighNoise{spike_prob, scale});
  }

  const Params& params() const noexcept { return params_; }
  std::string_view name() const noexcept;

  double sample(Rng& rng) const;

  double mean() const noexcept;
  /// Analytic variance of the law.
  double variance() const noexcept;
  /// Symmetric about its mean (odd statistics vanish).
  bool symmetric() const noexcept;

  bool operator==(const NoiseModel&) const = default;

 private:
  Params params_;
};

/// One i.i.d. standard-normal input vector of length m.
Eigen::VectorXd gaussian_input(std::size_t m, Rng& rng);

/// Fills the columns of `out` (m x n) with i.i.d. standard-normal vectors,
/// column by column in time order.
void fill_gaussian_inputs(Eigen::MatrixXd& out, Rng& rng);

}  // namespace gmee
