// Acceptance gate. Each criterion prints one line:
//   criterion <n> PASS|FAIL <name>: <measurements> (<seconds> s)
// Usage: acceptance [--criterion N]   (all criteria when omitted)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracles.hpp"

#include "gmee/aec.hpp"
#include "gmee/analysis.hpp"
#include "gmee/filters.hpp"
#include "gmee/information_potential.hpp"
#include "gmee/simkit.hpp"

using namespace gmee;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double to_db(double x) { return 10.0 * std::log10(x); }

double median(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  return n % 2 == 1 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

SampleWindow fill_window(const Eigen::MatrixXd& u, const Eigen::VectorXd& d) {
  SampleWindow w(static_cast<std::size_t>(u.rows()), static_cast<std::size_t>(u.cols()));
  for (Eigen::Index i = 0; i < u.cols(); ++i) {
    w.push(u.col(i), d[i]);
  }
  return w;
}

// Max weight deviation between two filters driven by one seeded stream.
double trajectory_gap(const AlgorithmSpec& a, const AlgorithmSpec& b, std::size_t steps,
                      std::uint64_t seed) {
  const std::size_t m = 10;
  Rng rng(seed);
  const NoiseModel noise = NoiseModel::mixed_gaussian(0.05, 0.01, 100.0);
  const Eigen::VectorXd ws = seeded_unit_vector(m, seed + 1);
  auto fa = make_filter(a, m);
  auto fb = make_filter(b, m);
  double gap = 0.0;
  for (std::size_t n = 0; n < steps; ++n) {
    const Eigen::VectorXd u = gaussian_input(m, rng);
    const double d = ws.dot(u) + noise.sample(rng);
    fa->step(u, d);
    fb->step(u, d);
    gap = std::max(gap, (fa->weights() - fb->weights()).cwiseAbs().maxCoeff());
  }
  return gap;
}

// ---------------------------------------------------------------------------

Verdict reduction_identities() {
  AlgorithmSpec g;
  g.kind = AlgorithmKind::gmee;
  g.eta = 0.06;
  g.alpha = 2.0;
  g.beta = 1.0;
  AlgorithmSpec mee = g;
  mee.kind = AlgorithmKind::mee;
  const double gap_mee = trajectory_gap(g, mee, 10000, 41);

  double gap_q = 0.0;
  for (double alpha : {1.0, 2.0, 4.0}) {
    AlgorithmSpec full = g;
    full.alpha = alpha;
    AlgorithmSpec q = full;
    q.kind = AlgorithmKind::qgmee;
    q.gamma = 0.0;
    gap_q = std::max(gap_q, trajectory_gap(full, q, 10000, 42));
  }
  return {gap_mee <= 1e-12 && gap_q <= 1e-12,
          "max |dw| gmee(a=2)/mee " + fmt("%.3g", gap_mee) + ", qgmee(g=0)/gmee " +
              fmt("%.3g", gap_q) + " (tol 1e-12)"};
}

Verdict gradient_oracle() {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> pick_l(2, 12);
  const double alphas[] = {2.0, 3.0, 4.0, 8.0};
  const double betas[] = {0.5, 1.0, 5.0};
  const std::size_t m = 4;
  double worst = 0.0;
  std::size_t floor_bound = 0;
  bool floor_ok = true;
  for (int trial = 0; trial < 500; ++trial) {
    const double alpha = alphas[trial % 4];
    const double beta = betas[(trial / 4) % 3];
    const int l = pick_l(gen);
    Rng rng(gen());
    Eigen::MatrixXd u(m, l);
    fill_gaussian_inputs(u, rng);
    // Errors on the kernel's own scale so the potential is not saturated.
    const Eigen::VectorXd w = gaussian_input(m, rng);
    Eigen::VectorXd d(l);
    for (int i = 0; i < l; ++i) {
      d[i] = w.dot(u.col(i)) + beta * rng.normal();
    }
    const GgdKernel k(alpha, beta);
    const Eigen::VectorXd grad = gmee_gradient(fill_window(u, d), w, k).grad;
    const double h = 1e-5 * beta;
    Eigen::VectorXd fd(m);
    const double ip = generalized_ip(oracle::errors(u, d, w), k);
    for (std::size_t c = 0; c < m; ++c) {
      Eigen::VectorXd wp = w;
      Eigen::VectorXd wm = w;
      wp[static_cast<Eigen::Index>(c)] += h;
      wm[static_cast<Eigen::Index>(c)] -= h;
      fd[static_cast<Eigen::Index>(c)] = (generalized_ip(oracle::errors(u, d, wp), k) -
                                          generalized_ip(oracle::errors(u, d, wm), k)) /
                                         (2.0 * h);
    }
    // Round-off of the difference quotient: a few ulps of the potential over
    // 2h per component. Below it the difference quotient carries no digits.
    const double floor = 8.0 * std::numeric_limits<double>::epsilon() * ip / (2.0 * h) *
                         std::sqrt(static_cast<double>(m));
    const double err = (fd - grad).norm();
    if (grad.norm() * 1e-5 < floor) {
      ++floor_bound;
      floor_ok = floor_ok && err <= floor;
    } else {
      worst = std::max(worst, err / grad.norm());
    }
  }
  return {worst <= 1e-5 && floor_ok,
          "500 windows, worst relative error " + fmt("%.3g", worst) + " (tol 1e-5); " +
              std::to_string(floor_bound) +
              " windows with |grad| below the difference-quotient round-off floor agree "
              "within that floor: " + (floor_ok ? "yes" : "no")};
}

Verdict antisymmetry() {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> ua(1.0, 8.0);
  std::uniform_real_distribution<double> ub(0.5, 5.0);
  std::uniform_int_distribution<int> ul(2, 20);
  double worst_pq = 0.0;
  double worst_form = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double alpha = ua(gen);
    const double beta = ub(gen);
    const int l = ul(gen);
    const std::size_t m = 1 + static_cast<std::size_t>(trial % 10);
    Rng rng(gen());
    Eigen::MatrixXd u(m, l);
    fill_gaussian_inputs(u, rng);
    Eigen::VectorXd d(l);
    for (int i = 0; i < l; ++i) {
      d[i] = 2.0 * rng.normal();
    }
    const Eigen::VectorXd w = gaussian_input(m, rng);
    const GmeeGradient g = gmee_gradient(fill_window(u, d), w, GgdKernel(alpha, beta));
    worst_pq = std::max(worst_pq, (g.q + g.p).cwiseAbs().maxCoeff());
    const Eigen::VectorXd ref = oracle::gmee_direction(u, d, w, alpha, beta);
    worst_form = std::max(worst_form, (g.grad - ref).cwiseAbs().maxCoeff());
  }
  return {worst_pq <= 1e-10 && worst_form <= 1e-10,
          "1000 windows, max |Q+P| " + fmt("%.3g", worst_pq) + ", max |matrix - double sum| " +
              fmt("%.3g", worst_form) + " (tol 1e-10)"};
}

SysIdExperiment mixed_setting() {
  SysIdExperiment exp;
  exp.order = 10;
  exp.noise = NoiseModel::mixed_gaussian(0.05, 0.01, 100.0);
  exp.iterations = 100000;
  exp.runs = 20;
  return exp;
}

AlgorithmSpec gmee_at(double eta) {
  AlgorithmSpec s;
  s.kind = AlgorithmKind::gmee;
  s.eta = eta;
  s.alpha = 2.0;
  s.beta = 1.0;
  s.window = 10;
  return s;
}

Verdict emse_theory_match() {
  SysIdExperiment exp = mixed_setting();
  const std::vector<double> etas = {0.005, 0.01, 0.02, 0.04, 0.06};
  for (double eta : etas) {
    exp.algorithms.push_back(gmee_at(eta));
  }
  const std::vector<EmseMeasurement> sim = measure_emse(exp, 0.1);

  TheoryInputs in;
  in.kernel = GgdKernel(2.0, 1.0);
  in.window = 10;
  in.order = 10;
  in.noise = exp.noise;
  Rng rng(99);
  const SteadyStateVectors pq = estimate_steady_pq(in, kDefaultTheorySamples, rng);

  bool monotone = true;
  for (std::size_t k = 1; k < sim.size(); ++k) {
    monotone = monotone && sim[k].emse > sim[k - 1].emse;
  }
  bool close = true;
  std::string detail = "sim/theory dB:";
  for (std::size_t k = 0; k < 2; ++k) {
    in.eta = etas[k];
    const double theory_db = to_db(emse_theory(in, pq));
    close = close && std::abs(sim[k].emse_db - theory_db) <= 2.0;
    detail += " eta " + fmt("%g", etas[k]) + " " + fmt("%.2f", sim[k].emse_db) + "/" +
              fmt("%.2f", theory_db);
  }
  detail += " (tol 2 dB); sim dB over eta grid";
  for (const auto& s : sim) {
    detail += " " + fmt("%.2f", s.emse_db);
  }
  detail += monotone ? ", increasing" : ", NOT increasing";
  return {close && monotone, detail};
}

// Steady MSD per grid value with matched-speed calibration.
std::vector<SweepRow> table_sweep(const NoiseModel& noise, SweepParameter p,
                                  std::vector<double> values, double alpha, double beta,
                                  std::optional<double> hold_at) {
  SysIdExperiment exp;
  exp.noise = noise;
  exp.iterations = 4000;
  exp.runs = 20;
  AlgorithmSpec s;
  s.kind = AlgorithmKind::gmee;
  s.alpha = alpha;
  s.beta = beta;
  s.window = 10;
  exp.algorithms = {s};
  SweepSpec spec;
  spec.parameter = p;
  spec.values = std::move(values);
  spec.calibration = CalibrationOptions{};
  spec.calibrate_at = hold_at;
  return sweep(exp, spec);
}

Verdict robustness_trends() {
  const auto a = table_sweep(NoiseModel::mixed_gaussian(0.05, 0.01, 100.0), SweepParameter::alpha,
                             {1.0, 5.0}, 1.0, 6.0, std::nullopt);
  const double gain_a = a[1].steady_msd_db - a[0].steady_msd_db;

  const auto b = table_sweep(NoiseModel::bernoulli_rayleigh(0.3, 1.0), SweepParameter::beta,
                             {1.0, 9.0}, 1.0, 1.0, 9.0);
  const double gain_b = b[0].steady_msd_db - b[1].steady_msd_db;

  const auto c = table_sweep(NoiseModel::gaussian(0.0, 1.0), SweepParameter::alpha,
                             {1, 3, 5, 7, 9, 11, 13, 15, 17, 19}, 1.0, 5.5, std::nullopt);
  std::size_t best = 0;
  for (std::size_t k = 1; k < c.size(); ++k) {
    if (c[k].steady_msd_db < c[best].steady_msd_db) {
      best = k;
    }
  }
  const bool interior = best > 0 && best + 1 < c.size();

  const bool pass = gain_a >= 5.0 && gain_b >= 10.0 && interior;
  std::string detail = "(a) alpha 1 vs 5: " + fmt("%.2f", a[0].steady_msd_db) + " vs " +
                       fmt("%.2f", a[1].steady_msd_db) + " dB, gain " + fmt("%.2f", gain_a) +
                       " (need 5); (b) beta 1 vs 9: " + fmt("%.2f", b[0].steady_msd_db) + " vs " +
                       fmt("%.2f", b[1].steady_msd_db) + " dB, gain " + fmt("%.2f", gain_b) +
                       " (need 10); (c) best alpha " + fmt("%g", c[best].param_value) + " at " +
                       fmt("%.2f", c[best].steady_msd_db) + " dB, interior " +
                       (interior ? "yes" : "no");
  return {pass, detail};
}

Verdict stability_bound() {
  SysIdExperiment exp = mixed_setting();
  exp.iterations = 4000;
  exp.runs = 5;
  exp.algorithms = {gmee_at(0.06)};
  const OnsetResult onset = divergence_onset(exp, 0, OnsetOptions{});

  const Eigen::VectorXd eps = mean_apriori_window(exp, 0);
  TheoryInputs in;
  in.kernel = GgdKernel(2.0, 1.0);
  in.window = 10;
  in.order = 10;
  in.noise = exp.noise;
  Rng rng(99);
  const SteadyStateVectors pq = estimate_steady_pq(in, kDefaultTheorySamples, rng);
  const StepBound bound = gmee_step_bound(in, eps, pq);
  const StepBound ceiling = conservative_gmee_step_bound(in, pq);

  std::string detail = "onset " + fmt("%.4g", onset.onset()) + " (stable " +
                       fmt("%.4g", onset.stable_eta) + ", diverges " +
                       fmt("%.4g", onset.divergent_eta) + "); bound ";
  bool pass = false;
  if (bound.bounded()) {
    const double ratio = *bound.value / onset.onset();
    pass = ratio <= 3.0 && ratio >= 1.0 / 3.0;
    detail += fmt("%.4g", *bound.value) + ", ratio " + fmt("%.3g", ratio);
  } else {
    detail += "unbounded (pilot E[eps_a].(p-q) = " + fmt("%.3g", eps.dot(pq.p_tilde - pq.q_tilde)) +
              ")";
  }
  detail += "; conservative bound " +
            (ceiling.bounded() ? fmt("%.4g", *ceiling.value) : std::string("unbounded")) +
            " (need factor 3)";
  return {pass, detail};
}

// Builds a window of l errors falling into exactly h clusters at threshold 1.
SampleWindow clustered_window(std::size_t m, std::size_t l, std::size_t h, Rng& rng) {
  SampleWindow win(m, l);
  for (std::size_t i = 0; i < l; ++i) {
    const double center = 10.0 * static_cast<double>(i % h);
    win.push(gaussian_input(m, rng), center + 0.1 * rng.uniform01());
  }
  return win;
}

Verdict complexity_accounting() {
  struct Cell {
    std::uint64_t m, l, h;
    AlgorithmKind kind;
    OpCounts expected;
  };
  using K = AlgorithmKind;
  const Cell cells[] = {
      {10, 10, 3, K::lms, {21, 20, 0}},   {10, 10, 3, K::lmf, {21, 20, 1}},
      {10, 10, 3, K::gmcc, {24, 21, 3}},  {10, 10, 3, K::gmee, {723, 920, 602}},
      {10, 10, 3, K::qgmee, {233, 230, 92}},
      {5, 8, 2, K::lms, {11, 10, 0}},     {5, 8, 2, K::lmf, {11, 10, 1}},
      {5, 8, 2, K::gmcc, {14, 11, 3}},    {5, 8, 2, K::gmee, {437, 562, 386}},
      {5, 8, 2, K::qgmee, {112, 109, 50}},
      {1, 2, 1, K::lms, {3, 2, 0}},       {1, 2, 1, K::lmf, {3, 2, 1}},
      {1, 2, 1, K::gmcc, {6, 3, 3}},      {1, 2, 1, K::gmee, {31, 36, 26}},
      {1, 2, 1, K::qgmee, {14, 11, 8}},
  };
  std::size_t cell_mismatches = 0;
  for (const Cell& c : cells) {
    if (!(complexity_counts(c.kind, c.m, c.l, c.h) == c.expected)) {
      ++cell_mismatches;
    }
  }

  Rng rng(5);
  std::size_t cases = 0;
  std::size_t violations = 0;
  for (std::size_t m : {1, 5, 10, 32}) {
    for (std::size_t l = 2; l <= 24; ++l) {
      for (std::size_t h = 1; 2 * h <= l; ++h) {
        const SampleWindow win = clustered_window(m, l, h, rng);
        const Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
        const GgdKernel k(2.0, 1.0);
        OpCounts full;
        OpCounts quant;
        gmee_gradient(win, w, k, &full);
        const QgmeeDirection q = qgmee_direction(win, w, k, 1.0, &quant);
        if (q.codebook.size() != h) {
          throw std::logic_error("clustered window produced the wrong codebook size");
        }
        ++cases;
        if (!(quant.multiplications < full.multiplications)) {
          ++violations;
        }
      }
    }
  }
  return {cell_mismatches == 0 && violations == 0,
          std::to_string(15 - cell_mismatches) + "/15 table cells exact; instrumented QGMEE < "
          "GMEE multiplications in " + std::to_string(cases - violations) + "/" +
              std::to_string(cases) + " cases with H <= L/2"};
}

Verdict aec_ordering() {
  const std::size_t sessions = 50;
  const std::size_t samples = 40000;
  AlgorithmSpec lms;
  lms.kind = AlgorithmKind::lms;
  lms.eta = 0.002;
  AlgorithmSpec rls;
  rls.kind = AlgorithmKind::rls;
  rls.forgetting = 0.9999;
  rls.delta = 0.01;
  AlgorithmSpec gm = gmee_at(0.0018);
  const AlgorithmSpec algs[] = {lms, rls, gm};

  std::vector<AecSession> batch;
  for (std::size_t k = 0; k < sessions; ++k) {
    AecSession s;
    s.far_end = ar1_signal(samples, 0.9, 1000 + k);
    s.path = synth_echo_path(64, 0.05, 2000 + k);
    s.noise_seed = 3000 + k;
    for (const AlgorithmSpec& a : algs) {
      s.algorithm = a;
      batch.push_back(s);
    }
  }
  const std::vector<AecResult> results = run_aec_batch(batch);

  std::vector<double> erle[3];
  std::vector<double> msd[3];
  for (std::size_t r = 0; r < results.size(); ++r) {
    const AecResult& res = results[r];
    const std::size_t a = r % 3;
    erle[a].push_back(res.erle.back().erle_db);
    double sum = 0.0;
    for (std::size_t t = samples - samples / 10; t < samples; ++t) {
      sum += std::pow(10.0, res.msd_db[t] / 10.0);
    }
    msd[a].push_back(to_db(sum / static_cast<double>(samples / 10)));
  }
  const double e_lms = median(erle[0]);
  const double e_rls = median(erle[1]);
  const double e_gm = median(erle[2]);
  const double m_lms = median(msd[0]);
  const double m_gm = median(msd[2]);
  const bool ok_rls = e_gm >= e_rls;
  const bool ok_lms = e_gm >= e_lms;
  const bool ok_msd = m_lms - m_gm >= 3.0;
  return {ok_rls && ok_lms && ok_msd,
          "median final ERLE gmee " + fmt("%.2f", e_gm) + " rls " + fmt("%.2f", e_rls) + " lms " +
              fmt("%.2f", e_lms) + " dB (gmee>=rls " + (ok_rls ? "yes" : "no") + ", gmee>=lms " +
              (ok_lms ? "yes" : "no") + "); median steady MSD gmee " + fmt("%.2f", m_gm) +
              " lms " + fmt("%.2f", m_lms) + " rls " + fmt("%.2f", median(msd[1])) +
              " dB (need gmee 3 dB below lms)"};
}

Verdict noise_statistics() {
  Rng rng(31);
  const NoiseModel mixed = NoiseModel::mixed_gaussian(0.05, 0.01, 100.0);
  double s1 = 0.0;
  double s2 = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double v = mixed.sample(rng);
    s1 += v;
    s2 += v * v;
  }
  const double var = s2 / n - (s1 / n) * (s1 / n);

  const NoiseModel uni = NoiseModel::uniform(1.0);
  std::vector<double> x(n);
  double mean = 0.0;
  for (double& v : x) {
    v = uni.sample(rng);
    mean += v;
  }
  mean /= n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : x) {
    const double d = (v - mean) * (v - mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  const double kurt = m4 / (m2 * m2) - 3.0;

  Eigen::MatrixXd u(10, 100000);
  fill_gaussian_inputs(u, rng);
  const Eigen::MatrixXd cov = u * u.transpose() / 100000.0;
  const double cov_err = (cov - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff();

  const bool ok_var = std::abs(var - 5.0095) <= 0.02 * 5.0095;
  const bool ok_kurt = std::abs(kurt + 1.2) <= 0.05;
  const bool ok_cov = cov_err <= 0.05;
  return {ok_var && ok_kurt && ok_cov,
          "mixed variance " + fmt("%.4f", var) + " (5.0095 +- 2%), uniform excess kurtosis " +
              fmt("%.4f", kurt) + " (-1.2 +- 0.05), max |cov - I| " + fmt("%.4f", cov_err) +
              " (tol 0.05)"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, "reduction identities", reduction_identities},
      {2, "gradient oracle", gradient_oracle},
      {3, "antisymmetry and form equivalence", antisymmetry},
      {4, "EMSE theory vs simulation", emse_theory_match},
      {5, "robustness trends", robustness_trends},
      {6, "stability bound usefulness", stability_bound},
      {7, "complexity accounting", complexity_accounting},
      {8, "AEC ordering", aec_ordering},
      {9, "noise-model statistics", noise_statistics},
  };
  bool all_pass = true;
  for (const Criterion& c : all) {
    if (only != 0 && c.id != only) {
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d %s %s: %s (%.1f s)\n", c.id, v.pass ? "PASS" : "FAIL", c.name,
                v.detail.c_str(), secs);
    std::fflush(stdout);
    all_pass = all_pass && v.pass;
  }
  return all_pass ? 0 : 1;
}
