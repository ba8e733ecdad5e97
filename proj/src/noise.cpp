#include "gmee/noise.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gmee/error.hpp"

namespace gmee {

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  // 1 - u keeps the logarithm argument in (0, 1].
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) {
    throw InvalidParameter("NoiseModel: " + what);
  }
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

struct Validator {
  void operator()(const GaussianNoise& g) const {
    require(std::isfinite(g.mean), "gaussian mean must be finite");
    require(g.variance > 0.0 && std::isfinite(g.variance), "gaussian variance must be positive");
  }
  void operator()(const UniformNoise& u) const {
    require(u.variance > 0.0 && std::isfinite(u.variance), "uniform variance must be positive");
  }
  void operator()(const MixedGaussianNoise& m) const {
    require(is_probability(m.outlier_prob), "outlier_prob must lie in [0, 1]");
    require(m.variance_small > 0.0 && m.variance_large > 0.0,
            "mixture variances must be positive");
  }
  void operator()(const BernoulliRayleighNoise& b) const {
    require(is_probability(b.spike_prob), "spike_prob must lie in [0, 1]");
    require(b.rayleigh_scale > 0.0 && std::isfinite(b.rayleigh_scale),
            "rayleigh_scale must be positive");
  }
};

double rayleigh_mean(double scale) { return scale * std::sqrt(std::numbers::pi / 2.0); }

}  // namespace

NoiseModel::NoiseModel(Params params) : params_(params) { std::visit(Validator{}, params_); }

std::string_view NoiseModel::name() const noexcept {
  switch (params_.index()) {
    case 0: return "gaussian";
    case 1: return "uniform";
    case 2: return "mixed_gaussian";
    default: return "bernoulli_rayleigh";
  }
}

double NoiseModel::sample(Rng& rng) const {
  struct Sampler {
    Rng& rng;
    double operator()(const GaussianNoise& g) const {
      return g.mean + std::sqrt(g.variance) * rng.normal();
    }
    double operator()(const UniformNoise& u) const {
      const double half_width = std::sqrt(3.0 * u.variance);
      return half_width * (2.0 * rng.uniform01() - 1.0);
    }
    double operator()(const MixedGaussianNoise& m) const {
      const bool outlier = rng.bernoulli(m.outlier_prob);
      const double z = rng.normal();
      return std::sqrt(outlier ? m.variance_large : m.variance_small) * z;
    }
    double operator()(const BernoulliRayleighNoise& b) const {
      const bool gate = rng.bernoulli(b.spike_prob);
      // Inverse CDF of the Rayleigh law.
      const double r = b.rayleigh_scale * std::sqrt(-2.0 * std::log(1.0 - rng.uniform01()));
      return gate ? r - rayleigh_mean(b.rayleigh_scale) : 0.0;
    }
  };
  return std::visit(Sampler{rng}, params_);
}

double NoiseModel::mean() const noexcept {
  if (const auto* g = std::get_if<GaussianNoise>(&params_)) {
    return g->mean;
  }
  return 0.0;
}

double NoiseModel::variance() const noexcept {
  struct Var {
    double operator()(const GaussianNoise& g) const { return g.variance; }
    double operator()(const UniformNoise& u) const { return u.variance; }
    double operator()(const MixedGaussianNoise& m) const {
      return (1.0 - m.outlier_prob) * m.variance_small + m.outlier_prob * m.variance_large;
    }
    double operator()(const BernoulliRayleighNoise& b) const {
      // E[(R - mu)^2] = (2 - pi/2) s^2, gated with probability p.
      const double centered = (2.0 - std::numbers::pi / 2.0) * b.rayleigh_scale * b.rayleigh_scale;
      return b.spike_prob * centered;
    }
  };
  return std::visit(Var{}, params_);
}

bool NoiseModel::symmetric() const noexcept {
  return !std::holds_alternative<BernoulliRayleighNoise>(params_);
}

Eigen::VectorXd gaussian_input(std::size_t m, Rng& rng) {
  Eigen::VectorXd u(static_cast<Eigen::Index>(m));
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    u[k] = rng.normal();
  }
  return u;
}

void fill_gaussian_inputs(Eigen::MatrixXd& out, Rng& rng) {
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      out(r, c) = rng.normal();
    }
  }
}

}  // namespace gmee
