#include "gmee/aec.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "gmee/error.hpp"
#include "gmee/filters.hpp"

namespace gmee {

EchoPath synth_echo_path(std::size_t length, double decay_rate, std::uint64_t seed) {
  if (length == 0) {
    throw InvalidParameter("synth_echo_path: length must be at least 1");
  }
  if (!(decay_rate > 0.0 && decay_rate <= 1.0)) {
    throw InvalidParameter("synth_echo_path: decay_rate must lie in (0, 1]");
  }
  Rng rng(seed);
  EchoPath path{Eigen::VectorXd(static_cast<Eigen::Index>(length))};
  for (std::size_t k = 0; k < length; ++k) {
    path.taps[static_cast<Eigen::Index>(k)] =
        rng.normal() * std::exp(-decay_rate * static_cast<double>(k));
  }
  path.taps /= path.taps.norm();
  return path;
}

std::vector<double> ar1_signal(std::size_t length, double coefficient, std::uint64_t seed) {
  if (!(std::abs(coefficient) < 1.0)) {
    throw InvalidParameter("ar1_signal: |coefficient| must be below 1");
  }
  Rng rng(seed);
  const double gain = std::sqrt(1.0 - coefficient * coefficient);
  std::vector<double> x(length);
  double prev = rng.normal();  // start in the stationary law
  for (double& s : x) {
    prev = coefficient * prev + gain * rng.normal();
    s = prev;
  }
  return x;
}

void AecSession::validate() const {
  if (far_end.empty()) {
    throw InvalidInput("aec: far-end signal is empty");
  }
  if (!near_end.empty() && near_end.size() != far_end.size()) {
    throw DimensionMismatch("aec: near-end length " + std::to_string(near_end.size()) +
                            " differs from far-end length " + std::to_string(far_end.size()));
  }
  if (path.length() == 0 || !path.taps.allFinite()) {
    throw InvalidParameter("aec: echo path must have finite taps");
  }
  if (erle.window == 0 || erle.hop == 0) {
    throw InvalidParameter("aec: ERLE window and hop must be positive");
  }
}

std::vector<double> windowed_power(std::span<const double> x, std::size_t window,
                                   std::size_t hop) {
  if (window == 0 || hop == 0) {
    throw InvalidParameter("windowed_power: window and hop must be positive");
  }
  std::vector<double> out;
  for (std::size_t start = 0; start + window <= x.size(); start += hop) {
    double sum = 0.0;
    for (std::size_t k = start; k < start + window; ++k) {
      sum += x[k] * x[k];
    }
    out.push_back(sum / static_cast<double>(window));
  }
  return out;
}

std::vector<ErlePoint> erle(std::span<const double> far_power,
                            std::span<const double> residual_power, double cap_db,
                            const std::vector<bool>& excluded) {
  if (far_power.size() != residual_power.size()) {
    throw DimensionMismatch("erle: power traces differ in length");
  }
  std::vector<ErlePoint> out;
  for (std::size_t k = 0; k < far_power.size(); ++k) {
    if (!(far_power[k] > 0.0) || (k < excluded.size() && excluded[k])) {
      continue;
    }
    double db = cap_db;
    if (residual_power[k] > 0.0) {
      db = std::min(cap_db, 10.0 * std::log10(far_power[k] / residual_power[k]));
    }
    out.push_back({k, db});
  }
  return out;
}

AecResult run_aec(const AecSession& session) {
  session.validate();
  const std::size_t n = session.far_end.size();
  const std::size_t m = session.filter_order == 0 ? session.path.length() : session.filter_order;
  const auto mi = static_cast<Eigen::Index>(m);

  auto filter = make_filter(session.algorithm, m);
  // True path padded (or truncated) to the filter length for MSD.
  Eigen::VectorXd target = Eigen::VectorXd::Zero(mi);
  const Eigen::Index common = std::min(mi, session.path.taps.size());
  target.head(common) = session.path.taps.head(common);
  const double unmodelled = session.path.taps.tail(session.path.taps.size() - common).squaredNorm();

  Rng noise_rng(session.noise_seed);
  AecResult result;
  result.processed.resize(n);
  result.residual_echo.resize(n);
  result.msd_db.resize(n);

  Eigen::VectorXd regressor = Eigen::VectorXd::Zero(mi);
  const std::size_t path_len = session.path.length();
  for (std::size_t t = 0; t < n; ++t) {
    // Regressor holds x(t), x(t-1), ..., x(t-M+1).
    for (Eigen::Index k = mi - 1; k > 0; --k) {
      regressor[k] = regressor[k - 1];
    }
    regressor[0] = session.far_end[t];

    double echo = 0.0;
    for (std::size_t k = 0; k < path_len && k <= t; ++k) {
      echo += session.path.taps[static_cast<Eigen::Index>(k)] * session.far_end[t - k];
    }
    const double near = session.near_end.empty() ? 0.0 : session.near_end[t];
    const double mic = near + echo + session.noise.sample(noise_rng);

    if (result.diverged) {
      result.processed[t] = mic;
      result.residual_echo[t] = echo;
      result.msd_db[t] = std::numeric_limits<double>::infinity();
      continue;
    }
    const double msd = (target - filter->weights()).squaredNorm() + unmodelled;
    result.msd_db[t] = 10.0 * std::log10(msd);
    const double estimate = filter->weights().dot(regressor);
    result.processed[t] = mic - estimate;
    result.residual_echo[t] = echo - estimate;
    filter->step(regressor, mic);
    if (!filter->weights().allFinite()) {
      result.diverged = true;
    }
  }

  const std::vector<double> far_power =
      windowed_power(session.far_end, session.erle.window, session.erle.hop);
  const std::vector<double> residual_power =
      windowed_power(result.residual_echo, session.erle.window, session.erle.hop);
  std::vector<bool> excluded;
  if (!session.near_end.empty()) {
    const std::vector<double> near_power =
        windowed_power(session.near_end, session.erle.window, session.erle.hop);
    excluded.reserve(near_power.size());
    for (double p : near_power) {
      excluded.push_back(p > 0.0);
    }
  }
  result.erle = erle(far_power, residual_power, session.erle.cap_db, excluded);
  return result;
}

std::vector<AecResult> run_aec_batch(std::span<const AecSession> sessions) {
  std::vector<AecResult> results(sessions.size());
  const std::size_t workers = std::min<std::size_t>(
      sessions.size(), std::max(1U, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t k = 0; k < sessions.size(); ++k) {
      results[k] = run_aec(sessions[k]);
    }
    return results;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t k = t; k < sessions.size(); k += workers) {
            results[k] = run_aec(sessions[k]);
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
  return results;
}

}  // namespace gmee
