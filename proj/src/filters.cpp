#include "gmee/filters.hpp"

#include <cmath>
#include <string>

#include "gmee/error.hpp"
#include "gmee/kernels.hpp"

namespace gmee {

namespace {

void require_positive_eta(double eta, const char* who) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw InvalidParameter(std::string(who) + ": step size must be positive");
  }
}

// Arithmetic of one GgdKernel::influence call at a nonzero argument:
// a/beta, r*beta^alpha, /a, *norm, *exp -> 5 multiplicative, pow + exp.
constexpr std::uint64_t kInfluenceMul = 5;
constexpr std::uint64_t kInfluenceExp = 2;

}  // namespace

// ---------------------------------------------------------------------------

AdaptiveFilter::AdaptiveFilter(std::size_t order)
    : w_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(order))) {
  if (order == 0) {
    throw InvalidParameter("AdaptiveFilter: order must be positive");
  }
}

double AdaptiveFilter::step(const Eigen::Ref<const Eigen::VectorXd>& u, double d) {
  if (u.size() != w_.size()) {
    throw DimensionMismatch("filter step: input has " + std::to_string(u.size()) +
                            " entries, filter order is " + std::to_string(w_.size()));
  }
  const double e = update(u, d);
  ++steps_;
  return e;
}

void AdaptiveFilter::set_weights(const Eigen::VectorXd& w) {
  if (w.size() != w_.size()) {
    throw DimensionMismatch("set_weights: length differs from filter order");
  }
  w_ = w;
}

void AdaptiveFilter::reset() {
  w_.setZero();
  steps_ = 0;
}

// ---------------------------------------------------------------------------

LmsFilter::LmsFilter(std::size_t order, LmsParams params)
    : AdaptiveFilter(order), params_(params) {
  require_positive_eta(params.eta, "LMS");
}

std::unique_ptr<AdaptiveFilter> LmsFilter::clone() const {
  return std::make_unique<LmsFilter>(*this);
}

double LmsFilter::update(const Eigen::Ref<const Eigen::VectorXd>& u, double d) {
  const double e = d - w_.dot(u);
  w_ += (params_.eta * e) * u;
  if (counter_ != nullptr) {
    const auto m = static_cast<std::uint64_t>(order());
    counter_->multiplications += 2 * m + 1;
    counter_->additions += 2 * m;
  }
  return e;
}

LmfFilter::LmfFilter(std::size_t order, LmsParams params)
    : AdaptiveFilter(order), params_(params) {
  require_positive_eta(params.eta, "LMF");
}

std::unique_ptr<AdaptiveFilter> LmfFilter::clone() const {
  return std::make_unique<LmfFilter>(*this);
}

double LmfFilter::update(const Eigen::Ref<const Eigen::VectorXd>& u, double d) {
  const double e = d - w_.dot(u);
  w_ += (params_.eta * e * e * e) * u;
  return e;
}

GmccFilter::GmccFilter(std::size_t order, GmccParams params)
    : AdaptiveFilter(order), params_(params) {
  require_positive_eta(params.eta, "GMCC");
  if (!(params.shape >= 1.0) || !(params.lambda > 0.0)) {
    throw InvalidParameter("GMCC: shape must be >= 1 and lambda positive");
  }
}

std::unique_ptr<AdaptiveFilter> GmccFilter::clone() const {
  return std::make_unique<GmccFilter>(*this);
}

double GmccFilter::update(const Eigen::Ref<const Eigen::VectorXd>& u, double d) {
  const double e = d - w_.dot(u);
  if (e != 0.0) {
    const double a = std::abs(e);
    const double gain = params_.lambda * std::exp(-params_.lambda * std::pow(a, params_.shape)) *
                        std::pow(a, params_.shape - 1.0);
    w_ += (params_.eta * (e > 0.0 ? gain : -gain)) * u;
  }
  return e;
}

// ---------------------------------------------------------------------------

RlsFilter::RlsFilter(std::size_t order, RlsParams params)
    : AdaptiveFilter(order), params_(params) {
  if (!(params.delta > 0.0)) {
    throw InvalidParameter("RLS: delta must be positive");
  }
  if (!(params.forgetting > 0.0 && params.forgetting <= 1.0)) {
    throw InvalidParameter("RLS: forgetting factor must lie in (0, 1]");
  }
  RlsFilter::reset();
}

void RlsFilter::reset() {
  AdaptiveFilter::reset();
  const auto m = static_cast<Eigen::Index>(order());
  p_ = Eigen::MatrixXd::Identity(m, m) / params_.delta;
  pu_ = Eigen::VectorXd::Zero(m);
}

std::unique_ptr<AdaptiveFilter> RlsFilter::clone() const {
  return std::make_unique<RlsFilter>(*this);
}

double RlsFilter::update(const Eigen::Ref<const Eigen::VectorXd>& u, double d) {
  const double e = d - w_.dot(u);
  pu_.noalias() = p_ * u;
  const double denom = params_.forgetting + u.dot(pu_);
  w_ += (e / denom) * pu_;
  // P <- (P - P u u^T P / denom) / rho on the upper triangle, mirrored to
  // the lower one; the plain update drifts out of symmetry and eventually
  // diverges on long colored-input runs.
  p_.triangularView<Eigen::Upper>() -= (pu_ / denom) * pu_.transpose();
  p_.triangularView<Eigen::Upper>() /= params_.forgetting;
  p_.triangularView<Eigen::StrictlyLower>() = p_.transpose();
  if (params_.verify) {
    const double asym = (p_ - p_.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-9) {
      throw ConsistencyError("RLS: inverse correlation lost symmetry (" +
                             std::to_string(asym) + ")");
    }
    if (!(p_.diagonal().minCoeff() > 0.0)) {
      throw ConsistencyError("RLS: inverse correlation lost positive definiteness");
    }
  }
  return e;
}

// ---------------------------------------------------------------------------

void GmeeConfig::validate() const {
  require_positive_eta(eta, "GMEE");
  if (window < 2) {
    throw InvalidParameter("GMEE: window length must be at least 2");
  }
  if (!(gamma >= 0.0)) {
    throw InvalidParameter("GMEE: quantization threshold must be nonnegative");
  }
}

GmeeGradient gmee_gradient(const SampleWindow& window, const Eigen::VectorXd& w,
                           const GgdKernel& kernel, OpCounts* counter) {
  const std::size_t n = window.size();
  if (n < 2) {
    throw InsufficientWindow("gmee_gradient: need at least 2 window entries, have " +
                             std::to_string(n));
  }
  std::vector<double> e;
  window.errors(w, e, counter);

  const auto len = static_cast<Eigen::Index>(n);
  GmeeGradient out{Eigen::VectorXd::Zero(len), Eigen::VectorXd::Zero(len),
                   Eigen::VectorXd::Zero(w.size())};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // t = f(e_i - e_j) feeds p_i; the mirrored term of q_j is f(e_i - e_j)
      // as well, since q_j sums f(e_k - e_j) over k.
      const double t = kernel.influence(e[i] - e[j]);
      out.p[static_cast<Eigen::Index>(i)] += t;
      out.q[static_cast<Eigen::Index>(j)] += t;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    const auto idx = static_cast<Eigen::Index>(k);
    out.grad += (out.p[idx] - out.q[idx]) * window.input(k);
  }
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  out.grad *= kernel.alpha() / (nn * kernel.beta_pow_alpha());

  if (counter != nullptr) {
    const auto m = static_cast<std::uint64_t>(w.size());
    const std::uint64_t pairs = static_cast<std::uint64_t>(n) * n;
    counter->additions += pairs * 3 + n + n * m;
    counter->multiplications += pairs * kInfluenceMul + n * m + 2 + m;
    counter->exponentiations += pairs * kInfluenceExp;
  }
  return out;
}

QgmeeDirection qgmee_direction(const SampleWindow& window, const Eigen::VectorXd& w,
                               const GgdKernel& kernel, double gamma, OpCounts* counter) {
  const std::size_t n = window.size();
  if (n < 2) {
    throw InsufficientWindow("qgmee_direction: need at least 2 window entries, have " +
                             std::to_string(n));
  }
  std::vector<double> e;
  window.errors(w, e, counter);

  QgmeeDirection out;
  out.codebook = quantize(e, gamma);
  const std::size_t h_count = out.codebook.size();
  out.lambda = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double a = 0.0;
    for (std::size_t h = 0; h < h_count; ++h) {
      a += static_cast<double>(out.codebook.counts[h]) *
           kernel.influence(e[i] - out.codebook.centers[h]);
    }
    out.lambda[static_cast<Eigen::Index>(i)] = a;
  }
  out.grad = Eigen::VectorXd::Zero(w.size());
  for (std::size_t k = 0; k < n; ++k) {
    out.grad += out.lambda[static_cast<Eigen::Index>(k)] * window.input(k);
  }
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  out.grad *= 2.0 * kernel.alpha() / (nn * kernel.beta_pow_alpha());

  if (counter != nullptr) {
    const auto m = static_cast<std::uint64_t>(w.size());
    const std::uint64_t pairs = static_cast<std::uint64_t>(n) * h_count;
    // Quantizer distance scan: one subtraction per (sample, existing center).
    counter->additions += pairs;
    counter->additions += pairs * 2 + n * m;
    counter->multiplications += pairs * (kInfluenceMul + 1) + n * m + 3 + m;
    counter->exponentiations += pairs * kInfluenceExp;
  }
  return out;
}

Eigen::VectorXd mee_gradient(const SampleWindow& window, const Eigen::VectorXd& w,
                             double beta) {
  const std::size_t n = window.size();
  if (n < 2) {
    throw InsufficientWindow("mee_gradient: need at least 2 window entries");
  }
  std::vector<double> e;
  window.errors(w, e);
  const double sigma = beta / std::sqrt(2.0);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(w.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double diff = e[i] - e[j];
      if (diff == 0.0) {
        continue;
      }
      grad += (gaussian_kernel(diff, sigma) * diff) * (window.input(i) - window.input(j));
    }
  }
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  grad *= 2.0 / (nn * beta * beta);
  return grad;
}

// ---------------------------------------------------------------------------

WindowedFilter::WindowedFilter(std::size_t order, std::size_t window)
    : AdaptiveFilter(order), window_(order, window) {
  if (window < 2) {
    throw InvalidParameter("window length must be at least 2");
  }
}

void WindowedFilter::reset() {
  AdaptiveFilter::reset();
  window_.clear();
}

double WindowedFilter::update(const Eigen::Ref<const Eigen::VectorXd>& u, double d) {
  const double e = d - w_.dot(u);
  window_.push(u, d);
  if (window_.size() >= 2) {
    const double eta = step_size();
    w_ += eta * direction();
    if (counter_ != nullptr) {
      counter_->additions += order();
    }
  }
  return e;
}

GmeeFilter::GmeeFilter(std::size_t order, GmeeConfig config)
    : WindowedFilter(order, config.window), config_(config) {
  config_.validate();
}

std::unique_ptr<AdaptiveFilter> GmeeFilter::clone() const {
  return std::make_unique<GmeeFilter>(*this);
}

Eigen::VectorXd GmeeFilter::direction() {
  return gmee_gradient(window_, w_, config_.kernel, counter_).grad;
}

QgmeeFilter::QgmeeFilter(std::size_t order, GmeeConfig config)
    : WindowedFilter(order, config.window), config_(config) {
  config_.validate();
}

std::unique_ptr<AdaptiveFilter> QgmeeFilter::clone() const {
  return std::make_unique<QgmeeFilter>(*this);
}

Eigen::VectorXd QgmeeFilter::direction() {
  QgmeeDirection dir = qgmee_direction(window_, w_, config_.kernel, config_.gamma, counter_);
  last_codebook_size_ = dir.codebook.size();
  return std::move(dir.grad);
}

MeeFilter::MeeFilter(std::size_t order, MeeConfig config)
    : WindowedFilter(order, config.window), config_(config) {
  require_positive_eta(config.eta, "MEE");
  if (!(config.beta > 0.0)) {
    throw InvalidParameter("MEE: kernel width must be positive");
  }
}

std::unique_ptr<AdaptiveFilter> MeeFilter::clone() const {
  return std::make_unique<MeeFilter>(*this);
}

Eigen::VectorXd MeeFilter::direction() { return mee_gradient(window_, w_, config_.beta); }

// ---------------------------------------------------------------------------

std::unique_ptr<AdaptiveFilter> make_filter(const AlgorithmSpec& spec, std::size_t order) {
  switch (spec.kind) {
    case AlgorithmKind::lms:
      return std::make_unique<LmsFilter>(order, LmsParams{spec.eta});
    case AlgorithmKind::lmf:
      return std::make_unique<LmfFilter>(order, LmsParams{spec.eta});
    case AlgorithmKind::gmcc:
      return std::make_unique<GmccFilter>(order,
                                          GmccParams{spec.eta, spec.gmcc_shape, spec.gmcc_lambda});
    case AlgorithmKind::rls:
      return std::make_unique<RlsFilter>(order, RlsParams{spec.forgetting, spec.delta, false});
    case AlgorithmKind::mee:
      return std::make_unique<MeeFilter>(order, MeeConfig{spec.eta, spec.beta, spec.window});
    case AlgorithmKind::gmee:
      return std::make_unique<GmeeFilter>(
          order, GmeeConfig{GgdKernel(spec.alpha, spec.beta), spec.eta, spec.window, 0.0});
    case AlgorithmKind::qgmee:
      return std::make_unique<QgmeeFilter>(
          order, GmeeConfig{GgdKernel(spec.alpha, spec.beta), spec.eta, spec.window, spec.gamma});
  }
  throw InvalidParameter("make_filter: unknown algorithm");
}

}  // namespace gmee
