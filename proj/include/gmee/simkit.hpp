#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gmee/algorithm.hpp"
#include "gmee/noise.hpp"

namespace gmee {

/// Monte-Carlo system identification: d_n = w_s^T u_n + v_n with white
/// standard-normal u_n. Run r uses Rng(base_seed + r); every algorithm in a
/// run consumes the same input and noise streams.
struct SysIdExperiment {
  std::size_t order = 10;
  /// Unknown system; a seeded unit-norm draw from system_seed when unset.
  std::optional<Eigen::VectorXd> true_weights;
  std::uint64_t system_seed = 2022;
  NoiseModel noise;
  std::vector<AlgorithmSpec> algorithms;
  std::size_t iterations = 4000;
  std::size_t runs = 20;
  std::uint64_t base_seed = 1;
  /// Tail share of the iterations treated as steady state.
  double steady_fraction = 0.1;

  void validate() const;
};

/// Unit-norm vector of length m drawn from Rng(seed).
Eigen::VectorXd seeded_unit_vector(std::size_t m, std::uint64_t seed);

Eigen::VectorXd resolve_true_weights(const SysIdExperiment& exp);

/// Run-averaged learning curve of one algorithm.
struct MetricTrace {
  std::string algorithm;
  /// E||w_s - w_n||^2 for n = 0 .. iterations-1, w_0 the initial weights.
  std::vector<double> msd;
  std::vector<double> msd_db;
  /// Mean MSD over the steady tail.
  double steady_msd = 0.0;
  double steady_msd_db = 0.0;
  /// Mean of (w~_n^T u_n)^2 over the steady tail.
  double emse = 0.0;
  double emse_db = 0.0;
  std::size_t runs = 0;
  std::size_t divergent_runs = 0;
  /// Hash of the (u, d) stream each run fed to this algorithm.
  std::vector<std::uint64_t> stream_checksums;
};

/// Hex digest identifying an experiment configuration.
std::string fingerprint(const SysIdExperiment& exp);

/// Runs every configured algorithm; traces come back in configuration order.
/// Runs whose weights turn non-finite are excluded from the averages and
/// counted in divergent_runs.
std::vector<MetricTrace> run_sysid(const SysIdExperiment& exp);

struct EmseMeasurement {
  std::string algorithm;
  double eta = 0.0;
  double emse = 0.0;
  double emse_db = 0.0;
  std::size_t divergent_runs = 0;
};

/// Steady EMSE over the last tail_fraction of the iterations.
std::vector<EmseMeasurement> measure_emse(SysIdExperiment exp, double tail_fraction);

/// A trace that never improved on its starting point or lost every run.
bool failed_to_converge(const MetricTrace& trace);

// ---------------------------------------------------------------------------
// Step-size calibration

/// Matches convergence speed: find eta so that the run-averaged MSD first
/// reaches threshold_db at target_iteration under the calibration noise.
struct CalibrationOptions {
  std::size_t target_iteration = 300;
  double threshold_db = -5.0;
  NoiseModel noise = NoiseModel::gaussian(0.0, 1.0);
  std::size_t runs = 4;
  std::uint64_t seed = 777;
  double eta_min = 1e-7;
  double eta_max = 1e4;
  std::size_t bisection_steps = 24;

  bool operator==(const CalibrationOptions&) const = default;
};

struct CalibrationResult {
  double eta = 0.0;
  /// First iteration at or below the threshold with the chosen eta.
  std::size_t crossing = 0;
};

CalibrationResult calibrate_step_size(const AlgorithmSpec& spec, const Eigen::VectorXd& w_s,
                                      const CalibrationOptions& options);

// ---------------------------------------------------------------------------
// Parameter sweeps

enum class SweepParameter { alpha, beta, gamma, window, eta };

std::string_view to_string(SweepParameter p) noexcept;
std::optional<SweepParameter> parse_sweep_parameter(std::string_view name) noexcept;

struct SweepSpec {
  SweepParameter parameter = SweepParameter::alpha;
  std::vector<double> values;
  /// Index into SysIdExperiment::algorithms of the algorithm being varied.
  std::size_t algorithm_index = 0;
  /// Recalibrate eta at every grid point for matched convergence speed.
  std::optional<CalibrationOptions> calibration;
  /// With calibration set: calibrate once at this parameter value and hold
  /// that eta across the whole grid.
  std::optional<double> calibrate_at;
};

struct SweepRow {
  double param_value = 0.0;
  std::string noise;
  std::string algorithm;
  double steady_msd_db = 0.0;
  std::size_t divergence_count = 0;
  double eta = 0.0;
};

/// One run_sysid of the selected algorithm per grid value.
std::vector<SweepRow> sweep(const SysIdExperiment& exp, const SweepSpec& spec);

// ---------------------------------------------------------------------------
// Stability probes

/// Pilot estimate of E[eps_a]: the a-priori error window U_n^T (w_s - w_n),
/// newest sample last, averaged over the steady tail of every run.
Eigen::VectorXd mean_apriori_window(const SysIdExperiment& exp, std::size_t algorithm_index);

struct OnsetOptions {
  std::size_t runs = 5;
  double eta_lo = 1e-3;
  double eta_hi = 10.0;
  std::size_t bisection_steps = 16;

  bool operator==(const OnsetOptions&) const = default;
};

/// divergent_eta fails to converge (see failed_to_converge), stable_eta does
/// not, and the two are adjacent after bisection in log eta.
struct OnsetResult {
  double stable_eta = 0.0;
  double divergent_eta = 0.0;
  double onset() const { return std::sqrt(stable_eta * divergent_eta); }
};

OnsetResult divergence_onset(const SysIdExperiment& exp, std::size_t algorithm_index,
                             const OnsetOptions& options);

/// Copy of spec with the swept parameter set to value.
AlgorithmSpec with_parameter(AlgorithmSpec spec, SweepParameter parameter, double value);

}  // namespace gmee
