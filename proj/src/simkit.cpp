#include "gmee/simkit.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "gmee/error.hpp"
#include "gmee/filters.hpp"
#include "gmee/hash.hpp"

namespace gmee {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double to_db(double x) { return x > 0.0 ? 10.0 * std::log10(x) : -kInf; }

std::size_t tail_start(std::size_t iterations, double fraction) {
  const auto tail = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(iterations)));
  return iterations - std::clamp<std::size_t>(tail, 1, iterations);
}

// Runs fn(r) for r in [begin, end) on up to hardware_concurrency threads.
template <typename Fn>
void parallel_range(std::size_t begin, std::size_t end, Fn&& fn) {
  const std::size_t count = end - begin;
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1U, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t r = begin; r < end; ++r) {
      fn(r);
    }
    return;
  }
  // Worker exceptions are carried back to the caller instead of terminating.
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t r = begin + t; r < end; r += workers) {
            fn(r);
          }
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

struct RunStreams {
  Eigen::MatrixXd inputs;  // order x iterations
  std::vector<double> desired;
};

RunStreams generate_streams(const SysIdExperiment& exp, const Eigen::VectorXd& w_s,
                            std::uint64_t seed) {
  Rng rng(seed);
  RunStreams s;
  const auto m = static_cast<Eigen::Index>(exp.order);
  s.inputs.resize(m, static_cast<Eigen::Index>(exp.iterations));
  s.desired.resize(exp.iterations);
  for (std::size_t n = 0; n < exp.iterations; ++n) {
    auto col = s.inputs.col(static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < m; ++k) {
      col[k] = rng.normal();
    }
    s.desired[n] = w_s.dot(col) + exp.noise.sample(rng);
  }
  return s;
}

struct RunOutcome {
  std::vector<double> msd;
  double emse_sum = 0.0;
  bool diverged = false;
  std::uint64_t checksum = 0;
};

RunOutcome drive(AdaptiveFilter& filter, const RunStreams& s, const Eigen::VectorXd& w_s,
                 std::size_t steady_begin) {
  const std::size_t n_iter = s.desired.size();
  RunOutcome out;
  out.msd.resize(n_iter);
  Fnv1a hash;
  Eigen::VectorXd dev;
  for (std::size_t n = 0; n < n_iter; ++n) {
    const auto u = s.inputs.col(static_cast<Eigen::Index>(n));
    dev = w_s - filter.weights();
    out.msd[n] = dev.squaredNorm();
    if (!std::isfinite(out.msd[n])) {
      out.diverged = true;
      break;
    }
    if (n >= steady_begin) {
      const double ea = dev.dot(u);
      out.emse_sum += ea * ea;
    }
    hash.update(s.desired[n]);
    for (Eigen::Index k = 0; k < u.size(); ++k) {
      hash.update(u[k]);
    }
    filter.step(u, s.desired[n]);
  }
  if (!out.diverged && !filter.weights().allFinite()) {
    out.diverged = true;
  }
  out.checksum = hash.digest();
  return out;
}

}  // namespace

void SysIdExperiment::validate() const {
  if (order == 0) {
    throw InvalidParameter("experiment: order must be positive");
  }
  if (iterations == 0 || runs == 0) {
    throw InvalidParameter("experiment: iterations and runs must be at least 1");
  }
  if (!(steady_fraction > 0.0 && steady_fraction <= 1.0)) {
    throw InvalidParameter("experiment: steady_fraction must lie in (0, 1]");
  }
  if (true_weights && static_cast<std::size_t>(true_weights->size()) != order) {
    throw DimensionMismatch("experiment: true_weights length differs from order");
  }
  for (const AlgorithmSpec& spec : algorithms) {
    make_filter(spec, order);  // parameter validation
  }
}

Eigen::VectorXd seeded_unit_vector(std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd v = gaussian_input(m, rng);
  return v / v.norm();
}

Eigen::VectorXd resolve_true_weights(const SysIdExperiment& exp) {
  if (exp.true_weights) {
    return *exp.true_weights;
  }
  return seeded_unit_vector(exp.order, exp.system_seed);
}

std::string fingerprint(const SysIdExperiment& exp) {
  Fnv1a h;
  h.update(std::uint64_t{exp.order});
  for (double x : resolve_true_weights(exp)) {
    h.update(x);
  }
  h.update(exp.noise.name());
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, GaussianNoise>) {
          h.update(p.mean);
          h.update(p.variance);
        } else if constexpr (std::is_same_v<P, UniformNoise>) {
          h.update(p.variance);
        } else if constexpr (std::is_same_v<P, MixedGaussianNoise>) {
          h.update(p.outlier_prob);
          h.update(p.variance_small);
          h.update(p.variance_large);
        } else {
          h.update(p.spike_prob);
          h.update(p.rayleigh_scale);
        }
      },
      exp.noise.params());
  for (const AlgorithmSpec& a : exp.algorithms) {
    h.update(to_string(a.kind));
    h.update(a.display_name());
    for (double x : {a.eta, a.alpha, a.beta, a.gamma, a.gmcc_shape, a.gmcc_lambda,
                     a.forgetting, a.delta}) {
      h.update(x);
    }
    h.update(std::uint64_t{a.window});
  }
  h.update(std::uint64_t{exp.iterations});
  h.update(std::uint64_t{exp.runs});
  h.update(exp.base_seed);
  h.update(exp.steady_fraction);
  return h.hex();
}

std::vector<MetricTrace> run_sysid(const SysIdExperiment& exp) {
  exp.validate();
  const Eigen::VectorXd w_s = resolve_true_weights(exp);
  const std::size_t n_alg = exp.algorithms.size();
  const std::size_t n_iter = exp.iterations;
  const std::size_t steady_begin = tail_start(n_iter, exp.steady_fraction);

  std::vector<MetricTrace> traces(n_alg);
  std::vector<std::vector<double>> msd_sum(n_alg, std::vector<double>(n_iter, 0.0));
  std::vector<double> emse_sum(n_alg, 0.0);
  for (std::size_t a = 0; a < n_alg; ++a) {
    traces[a].algorithm = exp.algorithms[a].display_name();
    traces[a].stream_checksums.resize(exp.runs);
  }

  // Runs execute in chunks; each chunk reduces in run-index order so the
  // averages do not depend on scheduling.
  const std::size_t chunk = std::max(1U, std::thread::hardware_concurrency());
  for (std::size_t first = 0; first < exp.runs; first += chunk) {
    const std::size_t last = std::min(exp.runs, first + chunk);
    std::vector<std::vector<RunOutcome>> outcomes(last - first);
    parallel_range(first, last, [&](std::size_t r) {
      const RunStreams streams = generate_streams(exp, w_s, exp.base_seed + r);
      auto& slot = outcomes[r - first];
      slot.reserve(n_alg);
      for (const AlgorithmSpec& spec : exp.algorithms) {
        auto filter = make_filter(spec, exp.order);
        slot.push_back(drive(*filter, streams, w_s, steady_begin));
      }
    });
    for (std::size_t r = first; r < last; ++r) {
      for (std::size_t a = 0; a < n_alg; ++a) {
        const RunOutcome& o = outcomes[r - first][a];
        traces[a].stream_checksums[r] = o.checksum;
        if (o.diverged) {
          ++traces[a].divergent_runs;
          continue;
        }
        ++traces[a].runs;
        for (std::size_t n = 0; n < n_iter; ++n) {
          msd_sum[a][n] += o.msd[n];
        }
        emse_sum[a] += o.emse_sum;
      }
    }
  }

  const auto tail_len = static_cast<double>(n_iter - steady_begin);
  for (std::size_t a = 0; a < n_alg; ++a) {
    MetricTrace& t = traces[a];
    t.msd.assign(n_iter, kInf);
    t.msd_db.assign(n_iter, kInf);
    t.steady_msd = t.steady_msd_db = t.emse = t.emse_db = kInf;
    if (t.runs == 0) {
      continue;
    }
    const auto runs = static_cast<double>(t.runs);
    double steady = 0.0;
    for (std::size_t n = 0; n < n_iter; ++n) {
      t.msd[n] = msd_sum[a][n] / runs;
      t.msd_db[n] = to_db(t.msd[n]);
      if (n >= steady_begin) {
        steady += t.msd[n];
      }
    }
    t.steady_msd = steady / tail_len;
    t.steady_msd_db = to_db(t.steady_msd);
    t.emse = emse_sum[a] / (runs * tail_len);
    t.emse_db = to_db(t.emse);
  }
  return traces;
}

std::vector<EmseMeasurement> measure_emse(SysIdExperiment exp, double tail_fraction) {
  exp.steady_fraction = tail_fraction;
  const std::vector<MetricTrace> traces = run_sysid(exp);
  std::vector<EmseMeasurement> out;
  out.reserve(traces.size());
  for (std::size_t a = 0; a < traces.size(); ++a) {
    out.push_back({traces[a].algorithm, exp.algorithms[a].eta, traces[a].emse,
                   traces[a].emse_db, traces[a].divergent_runs});
  }
  return out;
}

bool failed_to_converge(const MetricTrace& trace) {
  if (trace.runs == 0 || trace.divergent_runs * 2 > trace.runs + trace.divergent_runs) {
    return true;
  }
  return !(trace.steady_msd < trace.msd.front());
}

// ---------------------------------------------------------------------------

namespace {

// First iteration whose run-averaged MSD is at or below the threshold;
// iterations when it never gets there.
std::size_t crossing_iteration(const AlgorithmSpec& spec, double eta,
                               const Eigen::VectorXd& w_s, const CalibrationOptions& opt) {
  SysIdExperiment probe;
  probe.order = static_cast<std::size_t>(w_s.size());
  probe.true_weights = w_s;
  probe.noise = opt.noise;
  AlgorithmSpec s = spec;
  s.eta = eta;
  probe.algorithms = {s};
  probe.iterations = 2 * opt.target_iteration + 1;
  probe.runs = opt.runs;
  probe.base_seed = opt.seed;
  const MetricTrace trace = run_sysid(probe).front();
  if (trace.runs == 0) {
    return probe.iterations;
  }
  const double threshold = std::pow(10.0, opt.threshold_db / 10.0);
  for (std::size_t n = 0; n < trace.msd.size(); ++n) {
    if (trace.msd[n] <= threshold) {
      return n;
    }
  }
  return probe.iterations;
}

}  // namespace

CalibrationResult calibrate_step_size(const AlgorithmSpec& spec, const Eigen::VectorXd& w_s,
                                      const CalibrationOptions& opt) {
  if (opt.target_iteration == 0 || opt.runs == 0 || !(opt.eta_min > 0.0) ||
      !(opt.eta_max > opt.eta_min)) {
    throw InvalidParameter("calibration: invalid options");
  }
  const std::size_t target = opt.target_iteration;
  auto fast_enough = [&](double eta) { return crossing_iteration(spec, eta, w_s, opt) <= target; };

  // Bracket [slow, fast] by doubling or halving from the configured eta.
  double eta = std::clamp(spec.eta, opt.eta_min, opt.eta_max);
  double slow = 0.0;
  double fast = 0.0;
  if (fast_enough(eta)) {
    fast = eta;
    slow = eta / 2.0;
    while (fast_enough(slow)) {
      fast = slow;
      slow /= 2.0;
      if (slow < opt.eta_min) {
        return {fast, crossing_iteration(spec, fast, w_s, opt)};
      }
    }
  } else {
    slow = eta;
    fast = eta * 2.0;
    while (!fast_enough(fast)) {
      slow = fast;
      fast *= 2.0;
      if (fast > opt.eta_max) {
        throw Error("calibration: no step size up to " + std::to_string(opt.eta_max) +
                    " reaches " + std::to_string(opt.threshold_db) + " dB by iteration " +
                    std::to_string(target) + " for " + spec.display_name());
      }
    }
  }
  for (std::size_t k = 0; k < opt.bisection_steps; ++k) {
    const double mid = std::sqrt(slow * fast);
    if (fast_enough(mid)) {
      fast = mid;
    } else {
      slow = mid;
    }
    if (fast / slow < 1.0 + 1e-3) {
      break;
    }
  }
  return {fast, crossing_iteration(spec, fast, w_s, opt)};
}

// ---------------------------------------------------------------------------

std::string_view to_string(SweepParameter p) noexcept {
  switch (p) {
    case SweepParameter::alpha: return "alpha";
    case SweepParameter::beta: return "beta";
    case SweepParameter::gamma: return "gamma";
    case SweepParameter::window: return "window";
    case SweepParameter::eta: return "eta";
  }
  return "unknown";
}

std::optional<SweepParameter> parse_sweep_parameter(std::string_view name) noexcept {
  for (auto p : {SweepParameter::alpha, SweepParameter::beta, SweepParameter::gamma,
                 SweepParameter::window, SweepParameter::eta}) {
    if (to_string(p) == name) {
      return p;
    }
  }
  return std::nullopt;
}

AlgorithmSpec with_parameter(AlgorithmSpec spec, SweepParameter parameter, double value) {
  switch (parameter) {
    case SweepParameter::alpha: spec.alpha = value; break;
    case SweepParameter::beta: spec.beta = value; break;
    case SweepParameter::gamma: spec.gamma = value; break;
    case SweepParameter::eta: spec.eta = value; break;
    case SweepParameter::window:
      if (!(value >= 2.0) || value != std::floor(value)) {
        throw InvalidParameter("sweep: window values must be integers >= 2");
      }
      spec.window = static_cast<std::size_t>(value);
      break;
  }
  return spec;
}

std::vector<SweepRow> sweep(const SysIdExperiment& exp, const SweepSpec& spec) {
  if (spec.values.empty()) {
    throw InvalidParameter("sweep: parameter grid is empty");
  }
  if (spec.algorithm_index >= exp.algorithms.size()) {
    throw InvalidParameter("sweep: algorithm index out of range");
  }
  const Eigen::VectorXd w_s = resolve_true_weights(exp);
  std::vector<SweepRow> rows;
  rows.reserve(spec.values.size());
  std::optional<double> held_eta;
  if (spec.calibration && spec.calibrate_at) {
    const AlgorithmSpec ref =
        with_parameter(exp.algorithms[spec.algorithm_index], spec.parameter, *spec.calibrate_at);
    held_eta = calibrate_step_size(ref, w_s, *spec.calibration).eta;
  }
  for (double value : spec.values) {
    AlgorithmSpec alg =
        with_parameter(exp.algorithms[spec.algorithm_index], spec.parameter, value);
    if (held_eta) {
      alg.eta = *held_eta;
    } else if (spec.calibration) {
      alg.eta = calibrate_step_size(alg, w_s, *spec.calibration).eta;
    }
    SysIdExperiment point = exp;
    point.true_weights = w_s;
    point.algorithms = {alg};
    const MetricTrace trace = run_sysid(point).front();
    rows.push_back({value, std::string(exp.noise.name()), alg.display_name(),
                    trace.steady_msd_db, trace.divergent_runs, alg.eta});
  }
  return rows;
}

// ---------------------------------------------------------------------------

Eigen::VectorXd mean_apriori_window(const SysIdExperiment& exp, std::size_t algorithm_index) {
  exp.validate();
  if (algorithm_index >= exp.algorithms.size()) {
    throw InvalidParameter("mean_apriori_window: algorithm index out of range");
  }
  const AlgorithmSpec& spec = exp.algorithms[algorithm_index];
  const auto l = static_cast<Eigen::Index>(spec.window);
  const Eigen::VectorXd w_s = resolve_true_weights(exp);
  const std::size_t steady_begin =
      std::max<std::size_t>(tail_start(exp.iterations, exp.steady_fraction), spec.window);
  if (steady_begin >= exp.iterations) {
    throw InsufficientWindow("mean_apriori_window: steady tail shorter than the window");
  }

  Eigen::VectorXd sum = Eigen::VectorXd::Zero(l);
  std::size_t count = 0;
  for (std::size_t r = 0; r < exp.runs; ++r) {
    const RunStreams streams = generate_streams(exp, w_s, exp.base_seed + r);
    auto filter = make_filter(spec, exp.order);
    Eigen::VectorXd partial = Eigen::VectorXd::Zero(l);
    std::size_t partial_count = 0;
    bool diverged = false;
    for (std::size_t n = 0; n < exp.iterations; ++n) {
      if (n >= steady_begin) {
        const Eigen::VectorXd dev = w_s - filter->weights();
        const auto first = static_cast<Eigen::Index>(n + 1) - l;
        partial.noalias() += streams.inputs.middleCols(first, l).transpose() * dev;
        ++partial_count;
      }
      filter->step(streams.inputs.col(static_cast<Eigen::Index>(n)), streams.desired[n]);
      if (!filter->weights().allFinite()) {
        diverged = true;
        break;
      }
    }
    if (!diverged) {
      sum += partial;
      count += partial_count;
    }
  }
  if (count == 0) {
    throw Error("mean_apriori_window: every run diverged");
  }
  return sum / static_cast<double>(count);
}

OnsetResult divergence_onset(const SysIdExperiment& exp, std::size_t algorithm_index,
                             const OnsetOptions& opt) {
  if (algorithm_index >= exp.algorithms.size()) {
    throw InvalidParameter("divergence_onset: algorithm index out of range");
  }
  if (opt.runs == 0 || !(opt.eta_lo > 0.0) || !(opt.eta_hi > opt.eta_lo)) {
    throw InvalidParameter("divergence_onset: invalid options");
  }
  const Eigen::VectorXd w_s = resolve_true_weights(exp);
  auto diverges = [&](double eta) {
    SysIdExperiment probe = exp;
    probe.true_weights = w_s;
    AlgorithmSpec s = exp.algorithms[algorithm_index];
    s.eta = eta;
    probe.algorithms = {s};
    probe.runs = opt.runs;
    return failed_to_converge(run_sysid(probe).front());
  };

  double stable = opt.eta_lo;
  double divergent = opt.eta_hi;
  if (diverges(stable)) {
    throw Error("divergence_onset: already fails to converge at eta " + std::to_string(stable));
  }
  // Widen upward until a failing step size is found.
  for (int k = 0; !diverges(divergent); ++k) {
    if (k == 20) {
      throw Error("divergence_onset: no failing step size up to " + std::to_string(divergent));
    }
    stable = divergent;
    divergent *= 4.0;
  }
  for (std::size_t k = 0; k < opt.bisection_steps && divergent / stable > 1.01; ++k) {
    const double mid = std::sqrt(stable * divergent);
    (diverges(mid) ? divergent : stable) = mid;
  }
  return {stable, divergent};
}

}  // namespace gmee
