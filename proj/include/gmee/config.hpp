#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gmee/aec.hpp"
#include "gmee/algorithm.hpp"
#include "gmee/analysis.hpp"
#include "gmee/error.hpp"
#include "gmee/noise.hpp"
#include "gmee/simkit.hpp"

namespace gmee {

enum class ExperimentKind { sysid, emse, sweep, aec, theory, complexity };

std::string_view to_string(ExperimentKind kind) noexcept;
std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) noexcept;

struct EmseSection {
  double tail_fraction = 0.1;

  bool operator==(const EmseSection&) const = default;
};

struct SweepSection {
  SweepParameter parameter = SweepParameter::alpha;
  std::vector<double> values;
  std::size_t algorithm = 0;
  /// Matched-speed step sizes: recalibrate per grid value, or once at
  /// calibrate_at when that is set.
  bool calibrate = false;
  std::optional<double> calibrate_at;
  CalibrationOptions calibration;

  bool operator==(const SweepSection&) const = default;
};

struct AecSection {
  std::size_t samples = 40000;
  /// Far-end source; a seeded AR(1) process when empty.
  std::string far_end_wav;
  /// Near-end speech; silence when empty.
  std::string near_end_wav;
  double ar1_coefficient = 0.9;
  std::uint64_t far_end_seed = 11;
  std::size_t path_length = 64;
  double path_decay = 0.05;
  std::uint64_t path_seed = 12;
  /// 0 means the path length.
  std::size_t filter_order = 0;
  ErleOptions erle;
  /// Also write the processed signal e(n) as 16-bit WAV per algorithm.
  bool write_wav = false;
  std::uint32_t sample_rate = 8000;

  bool operator==(const AecSection&) const = default;
};

/// The first algorithm must be GMEE; its eta, alpha, beta and window feed
/// the predictors, and a pilot simulation of the experiment supplies E[eps_a].
struct TheorySection {
  std::size_t samples = kDefaultTheorySamples;
  std::uint64_t seed = 99;

  bool operator==(const TheorySection&) const = default;
};

/// M comes from the experiment order.
struct ComplexitySection {
  std::size_t window = 10;
  std::size_t h = 3;

  bool operator==(const ComplexitySection&) const = default;
};

/// One experiment per file. Sections that do not belong to `kind` keep their
/// defaults and are ignored at execution.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::sysid;
  std::string output_dir = "out";
  std::uint64_t base_seed = 1;
  std::size_t order = 10;
  std::size_t iterations = 4000;
  std::size_t runs = 20;
  std::uint64_t system_seed = 2022;
  std::optional<std::vector<double>> true_weights;
  double steady_fraction = 0.1;
  NoiseModel noise;
  std::vector<AlgorithmSpec> algorithms;
  EmseSection emse;
  SweepSection sweep;
  AecSection aec;
  TheorySection theory;
  ComplexitySection complexity;

  bool operator==(const ExperimentConfig&) const = default;
};

struct ConfigIssue {
  /// Dotted field path such as "algorithms[0].eta"; empty for document-level
  /// problems.
  std::string path;
  std::string message;
  /// 1-based source line when known, otherwise 0.
  std::size_t line = 0;
};

/// Carries every problem found in a document, not only the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// Parses and validates a YAML document. Throws ConfigError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Canonical YAML form; parse_config(render_config(c)) == c.
std::string render_config(const ExperimentConfig& config);

/// Range checks against the owning modules' invariants. Empty when valid.
std::vector<ConfigIssue> validate_config(const ExperimentConfig& config);

SysIdExperiment to_experiment(const ExperimentConfig& config);

}  // namespace gmee
