#include "gmee/analysis.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gmee/error.hpp"
#include "gmee/quantizer.hpp"

namespace gmee {

void TheoryInputs::validate() const {
  if (window < 2) {
    throw InvalidParameter("TheoryInputs: window must be at least 2");
  }
  if (order == 0) {
    throw InvalidParameter("TheoryInputs: order must be positive");
  }
  if (!(input_variance > 0.0)) {
    throw InvalidParameter("TheoryInputs: input variance must be positive");
  }
  if (!(eta > 0.0)) {
    throw InvalidParameter("TheoryInputs: step size must be positive");
  }
}

namespace {

void require_samples(std::size_t samples) {
  if (samples < 1000) {
    throw InvalidParameter("steady-state estimation needs at least 1000 samples, got " +
                           std::to_string(samples));
  }
}

// Common tail of both bounds: 2 L^2 beta^alpha num / (alpha M sigma_u^2 den).
StepBound finish_bound(const TheoryInputs& inputs, double numerator, double denominator) {
  if (!(denominator > 0.0) || !std::isfinite(numerator)) {
    return StepBound::unbounded();
  }
  const double l = static_cast<double>(inputs.window);
  const double value = 2.0 * l * l * inputs.kernel.beta_pow_alpha() * numerator /
                       (inputs.kernel.alpha() * static_cast<double>(inputs.order) *
                        inputs.input_variance * denominator);
  if (!(value > 0.0) || !std::isfinite(value)) {
    return StepBound::unbounded();
  }
  return StepBound{value};
}

}  // namespace

SteadyStateVectors estimate_steady_pq(const TheoryInputs& inputs, std::size_t samples,
                                      Rng& rng) {
  inputs.validate();
  require_samples(samples);
  const std::size_t l = inputs.window;
  std::vector<double> v(l);
  Eigen::VectorXd p_sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(l));
  Eigen::VectorXd q_sum = p_sum;
  for (std::size_t s = 0; s < samples; ++s) {
    for (double& x : v) {
      x = inputs.noise.sample(rng);
    }
    for (std::size_t i = 0; i < l; ++i) {
      double p = 0.0;
      double q = 0.0;
      for (std::size_t j = 0; j < l; ++j) {
        p += inputs.kernel.influence(v[i] - v[j]);
        q += inputs.kernel.influence(v[j] - v[i]);
      }
      p_sum[static_cast<Eigen::Index>(i)] += p;
      q_sum[static_cast<Eigen::Index>(i)] += q;
    }
  }
  const auto n = static_cast<double>(samples);
  return SteadyStateVectors{p_sum / n, q_sum / n, samples};
}

Eigen::VectorXd estimate_steady_lambda(const TheoryInputs& inputs, double gamma,
                                       std::size_t samples, Rng& rng) {
  inputs.validate();
  require_samples(samples);
  const std::size_t l = inputs.window;
  std::vector<double> v(l);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(l));
  for (std::size_t s = 0; s < samples; ++s) {
    for (double& x : v) {
      x = inputs.noise.sample(rng);
    }
    const Codebook book = quantize(v, gamma);
    for (std::size_t i = 0; i < l; ++i) {
      double a = 0.0;
      for (std::size_t h = 0; h < book.size(); ++h) {
        a += static_cast<double>(book.counts[h]) * inputs.kernel.influence(v[i] - book.centers[h]);
      }
      sum[static_cast<Eigen::Index>(i)] += a;
    }
  }
  return sum / static_cast<double>(samples);
}

StepBound gmee_step_bound(const TheoryInputs& inputs, const Eigen::VectorXd& eps_a_mean,
                          const SteadyStateVectors& pq) {
  inputs.validate();
  const Eigen::VectorXd diff = pq.p_tilde - pq.q_tilde;
  if (eps_a_mean.size() != diff.size()) {
    throw DimensionMismatch("gmee_step_bound: a priori error estimate must have length L");
  }
  return finish_bound(inputs, eps_a_mean.dot(diff), diff.squaredNorm());
}

StepBound conservative_gmee_step_bound(const TheoryInputs& inputs,
                                       const SteadyStateVectors& pq) {
  inputs.validate();
  const Eigen::VectorXd diff = pq.p_tilde - pq.q_tilde;
  const double noise_sd = std::sqrt(inputs.noise.variance());
  const double ceiling =
      std::sqrt(static_cast<double>(inputs.window)) * noise_sd * diff.norm();
  return finish_bound(inputs, ceiling, diff.squaredNorm());
}

StepBound qgmee_step_bound(const TheoryInputs& inputs, const Eigen::VectorXd& eps_a_mean,
                           const Eigen::VectorXd& lambda_mean) {
  inputs.validate();
  if (eps_a_mean.size() != lambda_mean.size()) {
    throw DimensionMismatch("qgmee_step_bound: a priori error estimate must have length L");
  }
  const StepBound printed =
      finish_bound(inputs, eps_a_mean.dot(lambda_mean), lambda_mean.squaredNorm());
  if (!printed.bounded()) {
    return printed;
  }
  return StepBound{*printed.value / 2.0};
}

double emse_theory(const TheoryInputs& inputs, const SteadyStateVectors& pq) {
  inputs.validate();
  const double alpha = inputs.kernel.alpha();
  const double m = static_cast<double>(inputs.order);
  const double l = static_cast<double>(inputs.window);
  const double su2 = inputs.input_variance;
  const double beta_2a = inputs.kernel.beta_pow_alpha() * inputs.kernel.beta_pow_alpha();
  const double scale = inputs.eta * inputs.eta * alpha * alpha * m * m * su2 * su2 /
                       (4.0 * std::pow(l, 5.0) * beta_2a);
  return scale * (pq.p_tilde - pq.q_tilde).squaredNorm();
}

OpCounts complexity_counts(AlgorithmKind kind, std::uint64_t m, std::uint64_t l,
                           std::uint64_t h) {
  if (m == 0 || l == 0) {
    throw InvalidParameter("complexity_counts: dimensions must be positive");
  }
  switch (kind) {
    case AlgorithmKind::lms:
      return {2 * m + 1, 2 * m, 0};
    case AlgorithmKind::lmf:
      return {2 * m + 1, 2 * m, 1};
    case AlgorithmKind::gmcc:
      return {2 * m + 4, 2 * m + 1, 3};
    case AlgorithmKind::gmee:
      return {2 * m + m * l + 6 * l * l + 3, 2 * m + m * l + 8 * l * l, 6 * l * l + 2};
    case AlgorithmKind::qgmee:
      if (h == 0 || h > l) {
        throw InvalidParameter("complexity_counts: QGMEE needs 1 <= H <= L");
      }
      return {m + m * l + 4 * h * l + 3, m + m * l + 4 * h * l, 3 * h * l + 2};
    case AlgorithmKind::mee:
    case AlgorithmKind::rls:
      break;
  }
  throw InvalidParameter("complexity_counts: no closed form for algorithm '" +
                         std::string(to_string(kind)) + "'");
}

}  // namespace gmee
