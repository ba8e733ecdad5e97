#include "gmee/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "json.hpp"

#include "gmee/hash.hpp"
#include "gmee/io.hpp"
#include "gmee/version.hpp"
#include "gmee/wav.hpp"

namespace gmee {

namespace {

using nlohmann::json;

// dB columns carry 4 decimals; infinities spell out as inf / -inf.
std::string db(double x) {
  if (std::isinf(x)) {
    return x > 0 ? "inf" : "-inf";
  }
  if (std::isnan(x)) {
    return "nan";
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

std::string num(double x) {
  if (std::isinf(x)) {
    return x > 0 ? "inf" : "-inf";
  }
  // Shortest of 15 or 17 significant digits that reads back exactly.
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  if (std::strtod(buf, nullptr) != x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
  }
  return buf;
}

// Algorithm names end up in file names; keep them to a safe alphabet.
std::string slug(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_';
    out += ok ? c : '_';
  }
  return out;
}

// CSV fields with commas or quotes get quoted.
std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    out += c;
    if (c == '"') {
      out += '"';
    }
  }
  return out + "\"";
}

struct Artifact {
  std::string name;
  std::string content;
};

struct Outcome {
  std::vector<Artifact> files;
  json meta = json::object();
};

double mean_tail_db(const std::vector<double>& trace_db, double fraction) {
  const std::size_t n = trace_db.size();
  const auto tail = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fraction * n)));
  double sum = 0.0;
  for (std::size_t t = n - std::min(n, tail); t < n; ++t) {
    sum += std::pow(10.0, trace_db[t] / 10.0);
  }
  return 10.0 * std::log10(sum / static_cast<double>(std::min(n, tail)));
}

void run_sysid_kind(const ExperimentConfig& c, Outcome& o) {
  const SysIdExperiment exp = to_experiment(c);
  const std::vector<MetricTrace> traces = run_sysid(exp);
  std::string csv = "iteration,algorithm,msd_db\n";
  std::string summary = "algorithm,steady_msd_db,emse_db,runs,divergent_runs\n";
  for (const MetricTrace& t : traces) {
    const std::string name = field(t.algorithm);
    for (std::size_t n = 0; n < t.msd_db.size(); ++n) {
      csv += std::to_string(n) + "," + name + "," + db(t.msd_db[n]) + "\n";
    }
    summary += name + "," + db(t.steady_msd_db) + "," + db(t.emse_db) + "," +
               std::to_string(t.runs) + "," + std::to_string(t.divergent_runs) + "\n";
  }
  o.files.push_back({"traces.csv", std::move(csv)});
  o.files.push_back({"summary.csv", std::move(summary)});
  o.meta["experiment_fingerprint"] = fingerprint(exp);
}

void run_emse_kind(const ExperimentConfig& c, Outcome& o) {
  const SysIdExperiment exp = to_experiment(c);
  const std::vector<EmseMeasurement> rows = measure_emse(exp, c.emse.tail_fraction);
  std::string csv = "algorithm,eta,emse_db,divergent_runs\n";
  for (const EmseMeasurement& m : rows) {
    csv += field(m.algorithm) + "," + num(m.eta) + "," + db(m.emse_db) + "," +
           std::to_string(m.divergent_runs) + "\n";
  }
  o.files.push_back({"emse.csv", std::move(csv)});
  o.meta["experiment_fingerprint"] = fingerprint(exp);
}

void run_sweep_kind(const ExperimentConfig& c, Outcome& o) {
  const SysIdExperiment exp = to_experiment(c);
  SweepSpec spec;
  spec.parameter = c.sweep.parameter;
  spec.values = c.sweep.values;
  spec.algorithm_index = c.sweep.algorithm;
  if (c.sweep.calibrate) {
    spec.calibration = c.sweep.calibration;
    spec.calibrate_at = c.sweep.calibrate_at;
  }
  const std::vector<SweepRow> rows = sweep(exp, spec);
  std::string csv = "param_value,noise,algorithm,steady_msd_db,divergence_count\n";
  json etas = json::array();
  for (const SweepRow& r : rows) {
    csv += num(r.param_value) + "," + r.noise + "," + field(r.algorithm) + "," +
           db(r.steady_msd_db) + "," + std::to_string(r.divergence_count) + "\n";
    etas.push_back({{"param_value", r.param_value}, {"eta", r.eta}});
  }
  o.files.push_back({"sweep.csv", std::move(csv)});
  o.meta["experiment_fingerprint"] = fingerprint(exp);
  o.meta["step_sizes"] = etas;
  o.meta["calibrated"] = c.sweep.calibrate;
}

void run_aec_kind(const ExperimentConfig& c, Outcome& o) {
  const AecSection& a = c.aec;
  AecSession base;
  std::uint32_t rate = a.sample_rate;
  if (!a.far_end_wav.empty()) {
    WavData far = wav_read(a.far_end_wav);
    rate = far.sample_rate;
    base.far_end = std::move(far.samples);
  } else {
    base.far_end = ar1_signal(a.samples, a.ar1_coefficient, a.far_end_seed);
  }
  if (!a.near_end_wav.empty()) {
    base.near_end = wav_read(a.near_end_wav).samples;
  }
  base.noise = c.noise;
  base.path = synth_echo_path(a.path_length, a.path_decay, a.path_seed);
  base.filter_order = a.filter_order;
  base.noise_seed = c.base_seed;
  base.erle = a.erle;

  std::string summary = "algorithm,final_erle_db,steady_msd_db,diverged\n";
  for (std::size_t i = 0; i < c.algorithms.size(); ++i) {
    AecSession session = base;
    session.algorithm = c.algorithms[i];
    const AecResult r = run_aec(session);
    const std::string name = c.algorithms[i].display_name();
    const std::string stem = "aec_" + std::to_string(i) + "_" + slug(name);

    std::string erle_csv = "window_index,erle_db\n";
    for (const ErlePoint& p : r.erle) {
      erle_csv += std::to_string(p.window_index) + "," + db(p.erle_db) + "\n";
    }
    std::string msd_csv = "iteration,msd_db\n";
    for (std::size_t t = 0; t < r.msd_db.size(); ++t) {
      msd_csv += std::to_string(t) + "," + db(r.msd_db[t]) + "\n";
    }
    o.files.push_back({stem + "_erle.csv", std::move(erle_csv)});
    o.files.push_back({stem + "_msd.csv", std::move(msd_csv)});
    if (a.write_wav) {
      o.files.push_back({stem + "_processed.wav", wav_encode({rate, r.processed})});
    }
    const double final_erle = r.erle.empty() ? std::nan("") : r.erle.back().erle_db;
    summary += field(name) + "," + db(final_erle) + "," +
               db(r.diverged ? INFINITY : mean_tail_db(r.msd_db, 0.1)) + "," +
               (r.diverged ? "1" : "0") + "\n";
  }
  o.files.push_back({"aec_summary.csv", std::move(summary)});
  o.meta["erle"] = {{"window", a.erle.window}, {"hop", a.erle.hop}, {"cap_db", a.erle.cap_db}};
  o.meta["seeds"] = {{"noise", c.base_seed},
                     {"far_end", a.far_end_wav.empty() ? json(a.far_end_seed) : json(nullptr)},
                     {"path", a.path_seed}};
}

void run_theory_kind(const ExperimentConfig& c, Outcome& o) {
  const AlgorithmSpec& g = c.algorithms.front();
  TheoryInputs in;
  in.kernel = GgdKernel(g.alpha, g.beta);
  in.window = g.window;
  in.order = c.order;
  in.noise = c.noise;
  in.eta = g.eta;
  Rng rng(c.theory.seed);
  const SteadyStateVectors pq = estimate_steady_pq(in, c.theory.samples, rng);

  SysIdExperiment pilot = to_experiment(c);
  pilot.algorithms = {g};
  const Eigen::VectorXd eps = mean_apriori_window(pilot, 0);
  const StepBound bound = gmee_step_bound(in, eps, pq);
  const StepBound conservative = conservative_gmee_step_bound(in, pq);
  const double emse = emse_theory(in, pq);

  auto bound_text = [](const StepBound& b) { return b.bounded() ? num(*b.value) : "inf"; };
  std::string csv =
      "eta,alpha,beta,window,order,emse_theory_db,step_bound,conservative_step_bound\n";
  csv += num(g.eta) + "," + num(g.alpha) + "," + num(g.beta) + "," + std::to_string(g.window) +
         "," + std::to_string(c.order) + "," + db(10.0 * std::log10(emse)) + "," +
         bound_text(bound) + "," + bound_text(conservative) + "\n";
  o.files.push_back({"theory.csv", std::move(csv)});
  o.meta["theory_seed"] = c.theory.seed;
  o.meta["theory_samples"] = c.theory.samples;
}

void run_complexity_kind(const ExperimentConfig& c, Outcome& o) {
  std::string csv = "algorithm,multiplications,additions,exponentiations\n";
  for (AlgorithmKind k : {AlgorithmKind::lms, AlgorithmKind::lmf, AlgorithmKind::gmcc,
                          AlgorithmKind::gmee, AlgorithmKind::qgmee}) {
    const OpCounts n = complexity_counts(k, c.order, c.complexity.window, c.complexity.h);
    csv += std::string(to_string(k)) + "," + std::to_string(n.multiplications) + "," +
           std::to_string(n.additions) + "," + std::to_string(n.exponentiations) + "\n";
  }
  o.files.push_back({"complexity.csv", std::move(csv)});
}

}  // namespace

std::vector<std::filesystem::path> execute(const ExperimentConfig& config) {
  if (auto issues = validate_config(config); !issues.empty()) {
    throw ConfigError(std::move(issues));
  }
  Outcome o;
  switch (config.kind) {
    case ExperimentKind::sysid: run_sysid_kind(config, o); break;
    case ExperimentKind::emse: run_emse_kind(config, o); break;
    case ExperimentKind::sweep: run_sweep_kind(config, o); break;
    case ExperimentKind::aec: run_aec_kind(config, o); break;
    case ExperimentKind::theory: run_theory_kind(config, o); break;
    case ExperimentKind::complexity: run_complexity_kind(config, o); break;
  }

  Fnv1a h;
  h.update(render_config(config));
  o.meta["version"] = std::string(kVersion);
  o.meta["kind"] = std::string(to_string(config.kind));
  o.meta["config_fingerprint"] = h.hex();
  o.meta["base_seed"] = config.base_seed;
  o.meta["seed_rule"] = "run r uses base_seed + r";
  o.meta["system_seed"] = config.system_seed;
  json names = json::array();
  for (const Artifact& a : o.files) {
    names.push_back(a.name);
  }
  o.meta["files"] = names;

  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const Artifact& a : o.files) {
    written.push_back(dir / a.name);
    write_file_atomic(written.back(), a.content);
  }
  written.push_back(dir / "metadata.json");
  write_file_atomic(written.back(), o.meta.dump(2) + "\n");
  return written;
}

}  // namespace gmee
