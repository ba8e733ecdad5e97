#pragma once

#include <cstddef>
#include <memory>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "gmee/algorithm.hpp"
#include "gmee/kernels.hpp"
#include "gmee/op_counts.hpp"
#include "gmee/quantizer.hpp"
#include "gmee/sample_window.hpp"

namespace gmee {

/// Common step contract for every adaptive filter. A call to step() computes
/// the a priori error e = d - w^T u with the current weights, applies the
/// algorithm's update, and returns e.
class AdaptiveFilter {
 public:
  explicit AdaptiveFilter(std::size_t order);
  virtual ~AdaptiveFilter() = default;

  double step(const Eigen::Ref<const Eigen::VectorXd>& u, double d);

  std::size_t order() const noexcept { return static_cast<std::size_t>(w_.size()); }
  const Eigen::VectorXd& weights() const noexcept { return w_; }
  void set_weights(const Eigen::VectorXd& w);
  std::size_t step_count() const noexcept { return steps_; }

  /// Zero the weights and drop any window or auxiliary state.
  virtual void reset();

  virtual AlgorithmKind kind() const noexcept = 0;
  virtual std::unique_ptr<AdaptiveFilter> clone() const = 0;

  /// Instrumented algorithms add their per-step arithmetic to *counter.
  void attach_counter(OpCounts* counter) noexcept { counter_ = counter; }

 protected:
  virtual double update(const Eigen::Ref<const Eigen::VectorXd>& u, double d) = 0;

  Eigen::VectorXd w_;
  OpCounts* counter_ = nullptr;

 private:
  std::size_t steps_ = 0;
};

// ---------------------------------------------------------------------------
// Memoryless baselines

struct LmsParams {
  double eta = 0.01;
};

class LmsFilter final : public AdaptiveFilter {
 public:
  LmsFilter(std::size_t order, LmsParams params);
  AlgorithmKind kind() const noexcept override { return AlgorithmKind::lms; }
  std::unique_ptr<AdaptiveFilter> clone() const override;

 protected:
  double update(const Eigen::Ref<const Eigen::VectorXd>& u, double d) override;

 private:
  LmsParams params_;
};

/// Least mean fourth: w += eta e^3 u.
class LmfFilter final : public AdaptiveFilter {
 public:
  LmfFilter(std::size_t order, LmsParams params);
  AlgorithmKind kind() const noexcept override { return AlgorithmKind::lmf; }
  std::unique_ptr<AdaptiveFilter> clone() const override;

 protected:
  double update(const Eigen::Ref<const Eigen::VectorXd>& u, double d) override;

 private:
  LmsParams params_;
};

struct GmccParams {
  double eta = 0.01;
  double shape = 4.0;
  double lambda = 1.0;
};

/// Generalized maximum correntropy:
/// w += eta lambda exp(-lambda |e|^shape) |e|^(shape-1) sign(e) u.
class GmccFilter final : public AdaptiveFilter {
 public:
  GmccFilter(std::size_t order, GmccParams params);
  AlgorithmKind kind() const noexcept override { return AlgorithmKind::gmcc; }
  std::unique_ptr<AdaptiveFilter> clone() const override;

 protected:
  double update(const Eigen::Ref<const Eigen::VectorXd>& u, double d) override;

 private:
  GmccParams params_;
};

struct RlsParams {
  double forgetting = 0.999;
  /// Inverse correlation starts at I / delta.
  double delta = 0.01;
  /// Check symmetry of the inverse correlation matrix after every update.
  bool verify = false;
};

class RlsFilter final : public AdaptiveFilter {
 public:
  RlsFilter(std::size_t order, RlsParams params);
  AlgorithmKind kind() const noexcept override { return AlgorithmKind::rls; }
  std::unique_ptr<AdaptiveFilter> clone() const override;
  void reset() override;

  const Eigen::MatrixXd& inverse_correlation() const noexcept { return p_; }

 protected:
  double update(const Eigen::Ref<const Eigen::VectorXd>& u, double d) override;

 private:
  RlsParams params_;
  Eigen::MatrixXd p_;
  Eigen::VectorXd pu_;
};

// ---------------------------------------------------------------------------
// Error-entropy family

struct GmeeConfig {
  GgdKernel kernel{2.0, 1.0};
  double eta = 0.01;
  std::size_t window = 10;
  /// Quantization threshold, QGMEE only.
  double gamma = 0.0;

  void validate() const;
};

/// P, Q and the ascent direction of the generalized information potential.
struct GmeeGradient {
  Eigen::VectorXd p;
  Eigen::VectorXd q;
  /// (alpha / (L^2 beta^alpha)) U (P^T - Q^T), L the current window size.
  Eigen::VectorXd grad;
};

/// Recomputes the window errors under w and evaluates
///   p_i = sum_j G(e_i - e_j) |e_i - e_j|^(alpha-1) sign(e_i - e_j)
///   q_i = sum_j G(e_j - e_i) |e_j - e_i|^(alpha-1) sign(e_j - e_i).
/// Throws InsufficientWindow below two entries.
GmeeGradient gmee_gradient(const SampleWindow& window, const Eigen::VectorXd& w,
                           const GgdKernel& kernel, OpCounts* counter = nullptr);

struct QgmeeDirection {
  Codebook codebook;
  /// a_i = sum_h H_h G(e_i - c_h) |e_i - c_h|^(alpha-1) sign(e_i - c_h)
  Eigen::VectorXd lambda;
  /// 2 (alpha / (L^2 beta^alpha)) U Lambda^T. The factor 2 makes gamma = 0
  /// coincide with the GMEE direction U (P^T - Q^T).
  Eigen::VectorXd grad;
};

QgmeeDirection qgmee_direction(const SampleWindow& window, const Eigen::VectorXd& w,
                               const GgdKernel& kernel, double gamma,
                               OpCounts* counter = nullptr);

/// Explicit double-sum MEE direction with a Gaussian window G_beta of width
/// sigma = beta / sqrt(2):
///   (2 / (L^2 beta^2)) sum_i sum_j G_beta(e_i - e_j) (e_i - e_j) (u_i - u_j).
Eigen::VectorXd mee_gradient(const SampleWindow& window, const Eigen::VectorXd& w,
                             double beta);

/// Shared plumbing for the sliding-window algorithms: push, warm up with a
/// partial window of at least two samples, then ascend.
class WindowedFilter : public AdaptiveFilter {
 public:
  WindowedFilter(std::size_t order, std::size_t window);
  void reset() override;
  const SampleWindow& window() const noexcept { return window_; }

 protected:
  double update(const Eigen::Ref<const Eigen::VectorXd>& u, double d) final;
  /// Ascent direction for the current (>= 2 entry) window.
  virtual Eigen::VectorXd direction() = 0;
  virtual double step_size() const noexcept = 0;

  SampleWindow window_;
};

class GmeeFilter final : public WindowedFilter {
 public:
  GmeeFilter(std::size_t order, GmeeConfig config);
  AlgorithmKind kind() const noexcept override { return AlgorithmKind::gmee; }
  std::unique_ptr<AdaptiveFilter> clone() const override;
  const GmeeConfig& config() const noexcept { return config_; }

 protected:
  Eigen::VectorXd direction() override;
  double step_size() const noexcept override { return config_.eta; }

 private:
  GmeeConfig config_;
};

class QgmeeFilter final : public WindowedFilter {
 public:
  QgmeeFilter(std::size_t order, GmeeConfig config);
  AlgorithmKind kind() const noexcept override { return AlgorithmKind::qgmee; }
  std::unique_ptr<AdaptiveFilter> clone() const override;
  const GmeeConfig& config() const noexcept { return config_; }
  /// Codebook size used by the most recent update (0 before the first one).
  std::size_t last_codebook_size() const noexcept { return last_codebook_size_; }

 protected:
  Eigen::VectorXd direction() override;
  double step_size() const noexcept override { return config_.eta; }

 private:
  GmeeConfig config_;
  std::size_t last_codebook_size_ = 0;
};

struct MeeConfig {
  double eta = 0.01;
  double beta = 1.0;
  std::size_t window = 10;
};

class MeeFilter final : public WindowedFilter {
 public:
  MeeFilter(std::size_t order, MeeConfig config);
  AlgorithmKind kind() const noexcept override { return AlgorithmKind::mee; }
  std::unique_ptr<AdaptiveFilter> clone() const override;

 protected:
  Eigen::VectorXd direction() override;
  double step_size() const noexcept override { return config_.eta; }

 private:
  MeeConfig config_;
};

/// Builds the filter described by spec with `order` weights.
std::unique_ptr<AdaptiveFilter> make_filter(const AlgorithmSpec& spec, std::size_t order);

}  // namespace gmee
