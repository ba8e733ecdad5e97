#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "gmee/algorithm.hpp"
#include "gmee/kernels.hpp"
#include "gmee/noise.hpp"
#include "gmee/op_counts.hpp"

namespace gmee {

/// Parameters shared by the steady-state and stability predictors.
struct TheoryInputs {
  GgdKernel kernel{2.0, 1.0};
  std::size_t window = 10;
  std::size_t order = 10;
  double input_variance = 1.0;
  NoiseModel noise;
  /// Step size; used by the EMSE predictor only.
  double eta = 0.01;

  void validate() const;
};

/// Expected P and Q vectors once e_n has settled onto the noise v_n.
struct SteadyStateVectors {
  Eigen::VectorXd p_tilde;
  Eigen::VectorXd q_tilde;
  std::size_t sample_count = 0;
};

/// Maximum stable step size, or the signal that the predictor places no
/// finite limit (degenerate denominator).
struct StepBound {
  std::optional<double> value;

  bool bounded() const noexcept { return value.has_value(); }
  static StepBound unbounded() { return {}; }
};

inline constexpr std::size_t kDefaultTheorySamples = 100000;

/// Monte-Carlo average of p_i and q_i over `samples` i.i.d. noise windows of
/// length L. Throws InvalidParameter below 1000 samples.
SteadyStateVectors estimate_steady_pq(const TheoryInputs& inputs, std::size_t samples,
                                      Rng& rng);

/// Monte-Carlo average of the quantized vector Lambda over i.i.d. noise
/// windows quantized with threshold gamma.
Eigen::VectorXd estimate_steady_lambda(const TheoryInputs& inputs, double gamma,
                                       std::size_t samples, Rng& rng);

/// eta <= 2 L^2 beta^alpha E[eps_a]^T (p - q) / (alpha M sigma_u^2 ||p - q||^2).
/// eps_a_mean is the caller's estimate of the expected a priori error window.
StepBound gmee_step_bound(const TheoryInputs& inputs, const Eigen::VectorXd& eps_a_mean,
                          const SteadyStateVectors& pq);

/// Same bound with E[eps_a]^T (p - q) replaced by its Cauchy-Schwarz ceiling
/// sqrt(L) sigma_v ||p - q||, sigma_v the noise standard deviation.
StepBound conservative_gmee_step_bound(const TheoryInputs& inputs,
                                       const SteadyStateVectors& pq);

/// QGMEE counterpart built on E[Lambda]. The implemented QGMEE update carries
/// a factor 2 (see QgmeeDirection), so the printed bound is halved here; at
/// gamma = 0 the result equals gmee_step_bound.
StepBound qgmee_step_bound(const TheoryInputs& inputs, const Eigen::VectorXd& eps_a_mean,
                           const Eigen::VectorXd& lambda_mean);

/// Steady-state EMSE prediction
///   eta^2 alpha^2 M^2 sigma_u^4 / (4 L^5 beta^(2 alpha)) ||p - q||^2.
double emse_theory(const TheoryInputs& inputs, const SteadyStateVectors& pq);

/// Per-iteration operation counts from the closed forms of the complexity
/// table. Throws InvalidParameter for algorithms the table does not cover
/// (MEE, RLS) and when h > l for QGMEE.
OpCounts complexity_counts(AlgorithmKind kind, std::uint64_t m, std::uint64_t l,
                           std::uint64_t h);

}  // namespace gmee
