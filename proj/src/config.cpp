#include "gmee/config.hpp"

#include <cmath>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <type_traits>

#include <yaml-cpp/yaml.h>

#include "gmee/io.hpp"

namespace gmee {

namespace {

std::string join(std::string_view prefix, std::string_view key) {
  if (prefix.empty()) {
    return std::string(key);
  }
  return std::string(prefix) + "." + std::string(key);
}

std::string indexed(std::string_view prefix, std::size_t i) {
  return std::string(prefix) + "[" + std::to_string(i) + "]";
}

std::size_t line_of(const YAML::Node& node) {
  const YAML::Mark mark = node.Mark();
  return mark.line < 0 ? 0 : static_cast<std::size_t>(mark.line) + 1;
}

std::string summarize(const std::vector<ConfigIssue>& issues) {
  std::string out = std::to_string(issues.size()) + " configuration problem(s)";
  for (const ConfigIssue& i : issues) {
    out += "\n  ";
    if (!i.path.empty()) {
      out += i.path + ": ";
    }
    out += i.message;
    if (i.line > 0) {
      out += " (line " + std::to_string(i.line) + ")";
    }
  }
  return out;
}

// Reads typed fields out of YAML maps and records every problem instead of
// stopping at the first.
class Reader {
 public:
  explicit Reader(std::vector<ConfigIssue>& issues) : issues_(issues) {}

  void issue(std::string path, std::string message, std::size_t line = 0) {
    issues_.push_back({std::move(path), std::move(message), line});
  }

  // False (with an issue) unless node is a map; unknown keys are reported.
  bool expect_map(const YAML::Node& node, std::string_view path,
                  std::initializer_list<std::string_view> allowed) {
    if (!node.IsMap()) {
      issue(std::string(path), "expected a mapping", line_of(node));
      return false;
    }
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      bool known = false;
      for (std::string_view a : allowed) {
        known = known || a == key;
      }
      if (!known) {
        issue(join(path, key), "unknown key", line_of(kv.first));
      }
    }
    return true;
  }

  template <typename T>
  void get(const YAML::Node& map, std::string_view key, std::string_view path, T& out) {
    const YAML::Node node = map[std::string(key)];
    if (!node) {
      return;
    }
    convert(node, join(path, key), out);
  }

  template <typename T>
  void get_optional(const YAML::Node& map, std::string_view key, std::string_view path,
                    std::optional<T>& out) {
    const YAML::Node node = map[std::string(key)];
    if (!node || node.IsNull()) {
      return;
    }
    T value{};
    if (convert(node, join(path, key), value)) {
      out = std::move(value);
    }
  }

  bool convert(const YAML::Node& node, const std::string& path, double& out) {
    if (!node.IsScalar()) {
      issue(path, "expected a number", line_of(node));
      return false;
    }
    try {
      out = node.as<double>();
      return true;
    } catch (const YAML::Exception&) {
      issue(path, "expected a number, got '" + node.Scalar() + "'", line_of(node));
      return false;
    }
  }

  bool convert(const YAML::Node& node, const std::string& path, bool& out) {
    try {
      out = node.as<bool>();
      return true;
    } catch (const YAML::Exception&) {
      issue(path, "expected true or false", line_of(node));
      return false;
    }
  }

  bool convert(const YAML::Node& node, const std::string& path, std::string& out) {
    if (!node.IsScalar()) {
      issue(path, "expected a string", line_of(node));
      return false;
    }
    out = node.Scalar();
    return true;
  }

  template <typename T>
    requires std::is_unsigned_v<T>
  bool convert(const YAML::Node& node, const std::string& path, T& out) {
    if (!node.IsScalar() || node.Scalar().empty() || node.Scalar().front() == '-') {
      issue(path, "expected a non-negative integer", line_of(node));
      return false;
    }
    try {
      out = node.as<T>();
      return true;
    } catch (const YAML::Exception&) {
      issue(path, "expected a non-negative integer, got '" + node.Scalar() + "'",
            line_of(node));
      return false;
    }
  }

  bool convert(const YAML::Node& node, const std::string& path, std::vector<double>& out) {
    if (!node.IsSequence()) {
      issue(path, "expected a list of numbers", line_of(node));
      return false;
    }
    out.clear();
    bool ok = true;
    for (std::size_t i = 0; i < node.size(); ++i) {
      double v = 0.0;
      ok = convert(node[i], indexed(path, i), v) && ok;
      out.push_back(v);
    }
    return ok;
  }

 private:
  std::vector<ConfigIssue>& issues_;
};

NoiseModel read_noise(Reader& r, const YAML::Node& node, const std::string& path,
                      const NoiseModel& fallback) {
  if (!node.IsMap()) {
    r.issue(path, "expected a mapping", line_of(node));
    return fallback;
  }
  std::string model = "gaussian";
  r.get(node, "model", path, model);
  try {
    if (model == "gaussian") {
      GaussianNoise p;
      r.expect_map(node, path, {"model", "mean", "variance"});
      r.get(node, "mean", path, p.mean);
      r.get(node, "variance", path, p.variance);
      if (!(p.variance > 0.0)) {
        r.issue(join(path, "variance"), "must be positive");
        return fallback;
      }
      return NoiseModel(p);
    }
    if (model == "uniform") {
      UniformNoise p;
      r.expect_map(node, path, {"model", "variance"});
      r.get(node, "variance", path, p.variance);
      if (!(p.variance > 0.0)) {
        r.issue(join(path, "variance"), "must be positive");
        return fallback;
      }
      return NoiseModel(p);
    }
    if (model == "mixed_gaussian") {
      MixedGaussianNoise p;
      r.expect_map(node, path, {"model", "outlier_prob", "variance_small", "variance_large"});
      r.get(node, "outlier_prob", path, p.outlier_prob);
      r.get(node, "variance_small", path, p.variance_small);
      r.get(node, "variance_large", path, p.variance_large);
      bool ok = true;
      if (!(p.outlier_prob >= 0.0 && p.outlier_prob <= 1.0)) {
        r.issue(join(path, "outlier_prob"), "must lie in [0, 1]");
        ok = false;
      }
      for (auto [key, v] : {std::pair{"variance_small", p.variance_small},
                            std::pair{"variance_large", p.variance_large}}) {
        if (!(v > 0.0)) {
          r.issue(join(path, key), "must be positive");
          ok = false;
        }
      }
      return ok ? NoiseModel(p) : fallback;
    }
    if (model == "bernoulli_rayleigh") {
      BernoulliRayleighNoise p;
      r.expect_map(node, path, {"model", "spike_prob", "rayleigh_scale"});
      r.get(node, "spike_prob", path, p.spike_prob);
      r.get(node, "rayleigh_scale", path, p.rayleigh_scale);
      bool ok = true;
      if (!(p.spike_prob >= 0.0 && p.spike_prob <= 1.0)) {
        r.issue(join(path, "spike_prob"), "must lie in [0, 1]");
        ok = false;
      }
      if (!(p.rayleigh_scale > 0.0)) {
        r.issue(join(path, "rayleigh_scale"), "must be positive");
        ok = false;
      }
      return ok ? NoiseModel(p) : fallback;
    }
  } catch (const Error& e) {
    r.issue(path, e.what(), line_of(node));
    return fallback;
  }
  r.issue(join(path, "model"),
          "unknown noise model '" + model +
              "' (gaussian, uniform, mixed_gaussian, bernoulli_rayleigh)",
          line_of(node["model"]));
  return fallback;
}

AlgorithmSpec read_algorithm(Reader& r, const YAML::Node& node, const std::string& path) {
  AlgorithmSpec a;
  if (!r.expect_map(node, path,
                    {"kind", "label", "eta", "alpha", "beta", "window", "gamma", "gmcc_shape",
                     "gmcc_lambda", "forgetting", "delta"})) {
    return a;
  }
  std::string kind;
  if (!node["kind"]) {
    r.issue(join(path, "kind"), "required", line_of(node));
  } else {
    r.get(node, "kind", path, kind);
    if (auto k = parse_algorithm(kind)) {
      a.kind = *k;
    } else {
      r.issue(join(path, "kind"), "unknown algorithm '" + kind + "'", line_of(node["kind"]));
    }
  }
  r.get(node, "label", path, a.label);
  r.get(node, "eta", path, a.eta);
  r.get(node, "alpha", path, a.alpha);
  r.get(node, "beta", path, a.beta);
  r.get(node, "window", path, a.window);
  r.get(node, "gamma", path, a.gamma);
  r.get(node, "gmcc_shape", path, a.gmcc_shape);
  r.get(node, "gmcc_lambda", path, a.gmcc_lambda);
  r.get(node, "forgetting", path, a.forgetting);
  r.get(node, "delta", path, a.delta);
  return a;
}

void read_calibration(Reader& r, const YAML::Node& node, const std::string& path,
                      CalibrationOptions& c) {
  if (!r.expect_map(node, path,
                    {"target_iteration", "threshold_db", "noise", "runs", "seed", "eta_min",
                     "eta_max", "bisection_steps"})) {
    return;
  }
  r.get(node, "target_iteration", path, c.target_iteration);
  r.get(node, "threshold_db", path, c.threshold_db);
  if (node["noise"]) {
    c.noise = read_noise(r, node["noise"], join(path, "noise"), c.noise);
  }
  r.get(node, "runs", path, c.runs);
  r.get(node, "seed", path, c.seed);
  r.get(node, "eta_min", path, c.eta_min);
  r.get(node, "eta_max", path, c.eta_max);
  r.get(node, "bisection_steps", path, c.bisection_steps);
}

ExperimentConfig read_document(Reader& r, const YAML::Node& root) {
  ExperimentConfig c;
  if (!r.expect_map(root, "",
                    {"kind", "output_dir", "base_seed", "order", "iterations", "runs",
                     "system_seed", "true_weights", "steady_fraction", "noise", "algorithms",
                     "emse", "sweep", "aec", "theory", "complexity"})) {
    return c;
  }
  if (!root["kind"]) {
    r.issue("kind", "required (sysid, emse, sweep, aec, theory, complexity)");
  } else {
    std::string kind;
    r.get(root, "kind", "", kind);
    if (auto k = parse_experiment_kind(kind)) {
      c.kind = *k;
    } else {
      r.issue("kind", "unknown experiment kind '" + kind + "'", line_of(root["kind"]));
    }
  }
  r.get(root, "output_dir", "", c.output_dir);
  r.get(root, "base_seed", "", c.base_seed);
  r.get(root, "order", "", c.order);
  r.get(root, "iterations", "", c.iterations);
  r.get(root, "runs", "", c.runs);
  r.get(root, "system_seed", "", c.system_seed);
  r.get_optional(root, "true_weights", "", c.true_weights);
  r.get(root, "steady_fraction", "", c.steady_fraction);

  // The echo canceller defaults to its own mild impulsive mixture.
  const NoiseModel default_noise =
      c.kind == ExperimentKind::aec ? AecSession{}.noise : NoiseModel{};
  c.noise = root["noise"] ? read_noise(r, root["noise"], "noise", default_noise)
                          : default_noise;

  if (const YAML::Node algs = root["algorithms"]) {
    if (!algs.IsSequence()) {
      r.issue("algorithms", "expected a list", line_of(algs));
    } else {
      for (std::size_t i = 0; i < algs.size(); ++i) {
        c.algorithms.push_back(read_algorithm(r, algs[i], indexed("algorithms", i)));
      }
    }
  }

  if (const YAML::Node n = root["emse"]; n && r.expect_map(n, "emse", {"tail_fraction"})) {
    r.get(n, "tail_fraction", "emse", c.emse.tail_fraction);
  }

  if (const YAML::Node n = root["sweep"];
      n && r.expect_map(n, "sweep",
                        {"parameter", "values", "algorithm", "calibrate", "calibrate_at",
                         "calibration"})) {
    std::string param = std::string(to_string(c.sweep.parameter));
    r.get(n, "parameter", "sweep", param);
    if (auto p = parse_sweep_parameter(param)) {
      c.sweep.parameter = *p;
    } else {
      r.issue("sweep.parameter", "unknown parameter '" + param + "'", line_of(n["parameter"]));
    }
    r.get(n, "values", "sweep", c.sweep.values);
    r.get(n, "algorithm", "sweep", c.sweep.algorithm);
    r.get(n, "calibrate", "sweep", c.sweep.calibrate);
    r.get_optional(n, "calibrate_at", "sweep", c.sweep.calibrate_at);
    if (n["calibration"]) {
      read_calibration(r, n["calibration"], "sweep.calibration", c.sweep.calibration);
    }
  }

  if (const YAML::Node n = root["aec"];
      n && r.expect_map(n, "aec",
                        {"samples", "far_end_wav", "near_end_wav", "ar1_coefficient",
                         "far_end_seed", "path_length", "path_decay", "path_seed",
                         "filter_order", "erle_window", "erle_hop", "erle_cap_db", "write_wav",
                         "sample_rate"})) {
    AecSection& a = c.aec;
    r.get(n, "samples", "aec", a.samples);
    r.get(n, "far_end_wav", "aec", a.far_end_wav);
    r.get(n, "near_end_wav", "aec", a.near_end_wav);
    r.get(n, "ar1_coefficient", "aec", a.ar1_coefficient);
    r.get(n, "far_end_seed", "aec", a.far_end_seed);
    r.get(n, "path_length", "aec", a.path_length);
    r.get(n, "path_decay", "aec", a.path_decay);
    r.get(n, "path_seed", "aec", a.path_seed);
    r.get(n, "filter_order", "aec", a.filter_order);
    r.get(n, "erle_window", "aec", a.erle.window);
    r.get(n, "erle_hop", "aec", a.erle.hop);
    r.get(n, "erle_cap_db", "aec", a.erle.cap_db);
    r.get(n, "write_wav", "aec", a.write_wav);
    r.get(n, "sample_rate", "aec", a.sample_rate);
  }

  if (const YAML::Node n = root["theory"];
      n && r.expect_map(n, "theory", {"samples", "seed"})) {
    r.get(n, "samples", "theory", c.theory.samples);
    r.get(n, "seed", "theory", c.theory.seed);
  }

  if (const YAML::Node n = root["complexity"];
      n && r.expect_map(n, "complexity", {"window", "h"})) {
    r.get(n, "window", "complexity", c.complexity.window);
    r.get(n, "h", "complexity", c.complexity.h);
  }
  return c;
}

void check_algorithm(const AlgorithmSpec& a, const std::string& path,
                     std::vector<ConfigIssue>& out) {
  auto bad = [&](std::string_view field, std::string_view msg) {
    out.push_back({join(path, field), std::string(msg), 0});
  };
  if (!(a.eta > 0.0) || !std::isfinite(a.eta)) bad("eta", "must be positive and finite");
  if (!(a.alpha >= 1.0) || !std::isfinite(a.alpha)) bad("alpha", "must be at least 1");
  if (!(a.beta > 0.0) || !std::isfinite(a.beta)) bad("beta", "must be positive and finite");
  if (a.window < 2) bad("window", "must be at least 2");
  if (!(a.gamma >= 0.0) || !std::isfinite(a.gamma)) bad("gamma", "must be non-negative");
  if (!(a.gmcc_shape > 0.0)) bad("gmcc_shape", "must be positive");
  if (!(a.gmcc_lambda > 0.0)) bad("gmcc_lambda", "must be positive");
  if (!(a.forgetting > 0.0 && a.forgetting <= 1.0)) bad("forgetting", "must lie in (0, 1]");
  if (!(a.delta > 0.0)) bad("delta", "must be positive");
}

void emit_noise(YAML::Emitter& out, const NoiseModel& noise) {
  out << YAML::BeginMap << YAML::Key << "model" << YAML::Value << std::string(noise.name());
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, GaussianNoise>) {
          out << YAML::Key << "mean" << YAML::Value << p.mean;
          out << YAML::Key << "variance" << YAML::Value << p.variance;
        } else if constexpr (std::is_same_v<P, UniformNoise>) {
          out << YAML::Key << "variance" << YAML::Value << p.variance;
        } else if constexpr (std::is_same_v<P, MixedGaussianNoise>) {
          out << YAML::Key << "outlier_prob" << YAML::Value << p.outlier_prob;
          out << YAML::Key << "variance_small" << YAML::Value << p.variance_small;
          out << YAML::Key << "variance_large" << YAML::Value << p.variance_large;
        } else {
          out << YAML::Key << "spike_prob" << YAML::Value << p.spike_prob;
          out << YAML::Key << "rayleigh_scale" << YAML::Value << p.rayleigh_scale;
        }
      },
      noise.params());
  out << YAML::EndMap;
}

template <typename T>
void kv(YAML::Emitter& out, const char* key, const T& value) {
  out << YAML::Key << key << YAML::Value << value;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::sysid: return "sysid";
    case ExperimentKind::emse: return "emse";
    case ExperimentKind::sweep: return "sweep";
    case ExperimentKind::aec: return "aec";
    case ExperimentKind::theory: return "theory";
    case ExperimentKind::complexity: return "complexity";
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) noexcept {
  for (auto k : {ExperimentKind::sysid, ExperimentKind::emse, ExperimentKind::sweep,
                 ExperimentKind::aec, ExperimentKind::theory, ExperimentKind::complexity}) {
    if (to_string(k) == name) {
      return k;
    }
  }
  return std::nullopt;
}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error(summarize(issues)), issues_(std::move(issues)) {}

std::vector<ConfigIssue> validate_config(const ExperimentConfig& c) {
  std::vector<ConfigIssue> out;
  auto bad = [&](std::string path, std::string msg) {
    out.push_back({std::move(path), std::move(msg), 0});
  };
  if (c.output_dir.empty()) bad("output_dir", "must not be empty");
  if (c.order == 0) bad("order", "must be at least 1");
  if (c.iterations == 0) bad("iterations", "must be at least 1");
  if (c.runs == 0) bad("runs", "must be at least 1");
  if (!(c.steady_fraction > 0.0 && c.steady_fraction <= 1.0)) {
    bad("steady_fraction", "must lie in (0, 1]");
  }
  if (c.true_weights && c.true_weights->size() != c.order) {
    bad("true_weights", "has " + std::to_string(c.true_weights->size()) +
                            " entries but order is " + std::to_string(c.order));
  }
  for (std::size_t i = 0; i < c.algorithms.size(); ++i) {
    check_algorithm(c.algorithms[i], indexed("algorithms", i), out);
  }
  if (c.kind != ExperimentKind::complexity && c.algorithms.empty()) {
    bad("algorithms", "at least one algorithm is required");
  }

  switch (c.kind) {
    case ExperimentKind::sysid:
    case ExperimentKind::complexity:
      break;
    case ExperimentKind::emse:
      if (!(c.emse.tail_fraction > 0.0 && c.emse.tail_fraction <= 1.0)) {
        bad("emse.tail_fraction", "must lie in (0, 1]");
      }
      break;
    case ExperimentKind::sweep: {
      const SweepSection& s = c.sweep;
      if (s.values.empty()) bad("sweep.values", "must list at least one value");
      if (!c.algorithms.empty() && s.algorithm >= c.algorithms.size()) {
        bad("sweep.algorithm", "index " + std::to_string(s.algorithm) + " out of range");
      }
      for (std::size_t i = 0; i < s.values.size(); ++i) {
        if (s.algorithm >= c.algorithms.size()) {
          break;
        }
        try {
          AlgorithmSpec probe = with_parameter(c.algorithms[s.algorithm], s.parameter,
                                               s.values[i]);
          std::vector<ConfigIssue> sub;
          check_algorithm(probe, "", sub);
          for (ConfigIssue& issue : sub) {
            bad(indexed("sweep.values", i), issue.path + " " + issue.message);
          }
        } catch (const Error& e) {
          bad(indexed("sweep.values", i), e.what());
        }
      }
      if (s.calibrate_at && !s.calibrate) {
        bad("sweep.calibrate_at", "requires calibrate: true");
      }
      const CalibrationOptions& k = s.calibration;
      if (k.target_iteration == 0) bad("sweep.calibration.target_iteration", "must be >= 1");
      if (k.runs == 0) bad("sweep.calibration.runs", "must be >= 1");
      if (!(k.eta_min > 0.0)) bad("sweep.calibration.eta_min", "must be positive");
      if (!(k.eta_max > k.eta_min)) bad("sweep.calibration.eta_max", "must exceed eta_min");
      break;
    }
    case ExperimentKind::aec: {
      const AecSection& a = c.aec;
      if (a.far_end_wav.empty() && a.samples == 0) bad("aec.samples", "must be at least 1");
      if (!(std::abs(a.ar1_coefficient) < 1.0)) bad("aec.ar1_coefficient", "must lie in (-1, 1)");
      if (a.path_length == 0) bad("aec.path_length", "must be at least 1");
      if (!(a.path_decay > 0.0 && a.path_decay <= 1.0)) bad("aec.path_decay", "must lie in (0, 1]");
      if (a.erle.window == 0) bad("aec.erle_window", "must be at least 1");
      if (a.erle.hop == 0) bad("aec.erle_hop", "must be at least 1");
      if (!(a.erle.cap_db > 0.0)) bad("aec.erle_cap_db", "must be positive");
      if (a.sample_rate == 0) bad("aec.sample_rate", "must be positive");
      break;
    }
    case ExperimentKind::theory:
      if (!c.algorithms.empty() && c.algorithms.front().kind != AlgorithmKind::gmee) {
        bad("algorithms[0].kind", "theory experiments need a gmee algorithm first");
      }
      if (c.theory.samples < 1000) bad("theory.samples", "must be at least 1000");
      break;
  }
  if (c.kind == ExperimentKind::complexity) {
    if (c.complexity.window < 2) bad("complexity.window", "must be at least 2");
    if (c.complexity.h == 0 || c.complexity.h > c.complexity.window) {
      bad("complexity.h", "must lie in [1, window]");
    }
  }
  return out;
}

ExperimentConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    const std::size_t line = e.mark.line < 0 ? 0 : static_cast<std::size_t>(e.mark.line) + 1;
    throw ConfigError({{"", "syntax error: " + e.msg, line}});
  }
  std::vector<ConfigIssue> issues;
  Reader reader(issues);
  ExperimentConfig c = read_document(reader, root);
  // Fields that failed to read keep valid defaults, so range checks on the
  // rest still run and everything is reported together.
  for (ConfigIssue& i : validate_config(c)) {
    issues.push_back(std::move(i));
  }
  if (!issues.empty()) {
    throw ConfigError(std::move(issues));
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw ConfigError({{"", e.what(), 0}});
  }
  return parse_config(text);
}

std::string render_config(const ExperimentConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(std::numeric_limits<double>::max_digits10);
  out << YAML::BeginMap;
  kv(out, "kind", std::string(to_string(c.kind)));
  kv(out, "output_dir", c.output_dir);
  kv(out, "base_seed", c.base_seed);
  kv(out, "order", c.order);
  kv(out, "iterations", c.iterations);
  kv(out, "runs", c.runs);
  kv(out, "system_seed", c.system_seed);
  if (c.true_weights) {
    out << YAML::Key << "true_weights" << YAML::Value << YAML::Flow << *c.true_weights;
  }
  kv(out, "steady_fraction", c.steady_fraction);
  out << YAML::Key << "noise" << YAML::Value;
  emit_noise(out, c.noise);

  out << YAML::Key << "algorithms" << YAML::Value << YAML::BeginSeq;
  for (const AlgorithmSpec& a : c.algorithms) {
    out << YAML::BeginMap;
    kv(out, "kind", std::string(to_string(a.kind)));
    if (!a.label.empty()) {
      kv(out, "label", a.label);
    }
    kv(out, "eta", a.eta);
    kv(out, "alpha", a.alpha);
    kv(out, "beta", a.beta);
    kv(out, "window", a.window);
    kv(out, "gamma", a.gamma);
    kv(out, "gmcc_shape", a.gmcc_shape);
    kv(out, "gmcc_lambda", a.gmcc_lambda);
    kv(out, "forgetting", a.forgetting);
    kv(out, "delta", a.delta);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "emse" << YAML::Value << YAML::BeginMap;
  kv(out, "tail_fraction", c.emse.tail_fraction);
  out << YAML::EndMap;

  const SweepSection& s = c.sweep;
  out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
  kv(out, "parameter", std::string(to_string(s.parameter)));
  out << YAML::Key << "values" << YAML::Value << YAML::Flow << s.values;
  kv(out, "algorithm", s.algorithm);
  kv(out, "calibrate", s.calibrate);
  if (s.calibrate_at) {
    kv(out, "calibrate_at", *s.calibrate_at);
  }
  out << YAML::Key << "calibration" << YAML::Value << YAML::BeginMap;
  kv(out, "target_iteration", s.calibration.target_iteration);
  kv(out, "threshold_db", s.calibration.threshold_db);
  out << YAML::Key << "noise" << YAML::Value;
  emit_noise(out, s.calibration.noise);
  kv(out, "runs", s.calibration.runs);
  kv(out, "seed", s.calibration.seed);
  kv(out, "eta_min", s.calibration.eta_min);
  kv(out, "eta_max", s.calibration.eta_max);
  kv(out, "bisection_steps", s.calibration.bisection_steps);
  out << YAML::EndMap << YAML::EndMap;

  const AecSection& a = c.aec;
  out << YAML::Key << "aec" << YAML::Value << YAML::BeginMap;
  kv(out, "samples", a.samples);
  kv(out, "far_end_wav", a.far_end_wav);
  kv(out, "near_end_wav", a.near_end_wav);
  kv(out, "ar1_coefficient", a.ar1_coefficient);
  kv(out, "far_end_seed", a.far_end_seed);
  kv(out, "path_length", a.path_length);
  kv(out, "path_decay", a.path_decay);
  kv(out, "path_seed", a.path_seed);
  kv(out, "filter_order", a.filter_order);
  kv(out, "erle_window", a.erle.window);
  kv(out, "erle_hop", a.erle.hop);
  kv(out, "erle_cap_db", a.erle.cap_db);
  kv(out, "write_wav", a.write_wav);
  kv(out, "sample_rate", a.sample_rate);
  out << YAML::EndMap;

  out << YAML::Key << "theory" << YAML::Value << YAML::BeginMap;
  kv(out, "samples", c.theory.samples);
  kv(out, "seed", c.theory.seed);
  out << YAML::EndMap;

  out << YAML::Key << "complexity" << YAML::Value << YAML::BeginMap;
  kv(out, "window", c.complexity.window);
  kv(out, "h", c.complexity.h);
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

SysIdExperiment to_experiment(const ExperimentConfig& c) {
  SysIdExperiment exp;
  exp.order = c.order;
  if (c.true_weights) {
    exp.true_weights = Eigen::Map<const Eigen::VectorXd>(
        c.true_weights->data(), static_cast<Eigen::Index>(c.true_weights->size()));
  }
  exp.system_seed = c.system_seed;
  exp.noise = c.noise;
  exp.algorithms = c.algorithms;
  exp.iterations = c.iterations;
  exp.runs = c.runs;
  exp.base_seed = c.base_seed;
  exp.steady_fraction = c.steady_fraction;
  return exp;
}

}  // namespace gmee
