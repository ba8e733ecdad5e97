#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "gmee/algorithm.hpp"
#include "gmee/noise.hpp"

namespace gmee {

/// Linear echo path: y(n) = sum_k taps[k] x(n - k).
struct EchoPath {
  Eigen::VectorXd taps;

  std::size_t length() const noexcept { return static_cast<std::size_t>(taps.size()); }
};

/// Seeded standard-normal taps under an exp(-decay_rate k) envelope,
/// normalized to unit energy.
EchoPath synth_echo_path(std::size_t length, double decay_rate, std::uint64_t seed);

/// Zero-mean AR(1) process x(n) = a x(n-1) + sqrt(1 - a^2) w(n), unit
/// stationary variance; stands in for far-end speech.
std::vector<double> ar1_signal(std::size_t length, double coefficient, std::uint64_t seed);

struct ErleOptions {
  std::size_t window = 1024;
  std::size_t hop = 512;
  /// Value reported when the residual echo vanishes.
  double cap_db = 80.0;

  bool operator==(const ErleOptions&) const = default;
};

struct AecSession {
  std::vector<double> far_end;
  /// Near-end talker p(n); empty means silence.
  std::vector<double> near_end;
  NoiseModel noise = NoiseModel::mixed_gaussian(0.05, 0.001, 0.01);
  EchoPath path;
  AlgorithmSpec algorithm;
  /// Adaptive filter length; 0 selects the path length.
  std::size_t filter_order = 0;
  std::uint64_t noise_seed = 1;
  ErleOptions erle;

  void validate() const;
};

struct ErlePoint {
  std::size_t window_index = 0;
  double erle_db = 0.0;
};

struct AecResult {
  /// e(n) = d(n) - y_hat(n), the signal sent back to the far end.
  std::vector<double> processed;
  /// y(n) - y_hat(n), known because the simulation owns the true path.
  std::vector<double> residual_echo;
  /// ||h - w_n||^2 in dB before each update, h zero-padded to the filter length.
  std::vector<double> msd_db;
  std::vector<ErlePoint> erle;
  bool diverged = false;
};

/// Microphone d(n) = p(n) + (h * x)(n) + v(n); the filter sees the last M
/// far-end samples as regressor and d(n) as desired signal.
AecResult run_aec(const AecSession& session);

/// Independent sessions on up to hardware_concurrency threads; results come
/// back in input order and do not depend on scheduling.
std::vector<AecResult> run_aec_batch(std::span<const AecSession> sessions);

/// Mean power of x over frames [k hop, k hop + window).
std::vector<double> windowed_power(std::span<const double> x, std::size_t window,
                                   std::size_t hop);

/// 10 log10(far / residual) per frame. Frames with zero far-end power or
/// flagged in `excluded` are skipped; a zero residual yields cap_db.
std::vector<ErlePoint> erle(std::span<const double> far_power,
                            std::span<const double> residual_power, double cap_db = 80.0,
                            const std::vector<bool>& excluded = {});

}  // namespace gmee
