#include <cmath>
#include <tuple>

#include "doctest.h"

#include "gmee/analysis.hpp"
#include "gmee/error.hpp"

using namespace gmee;

namespace {

TheoryInputs mixed_inputs() {
  TheoryInputs in;
  in.kernel = GgdKernel(2.0, 1.0);
  in.window = 10;
  in.order = 10;
  in.noise = NoiseModel::mixed_gaussian(0.05, 0.01, 100.0);
  in.eta = 0.01;
  return in;
}

SteadyStateVectors from_p(const Eigen::VectorXd& p) { return {p, -p, 1000}; }

}  // namespace

TEST_CASE("complexity table cells") {
  using K = AlgorithmKind;
  struct Row {
    std::uint64_t m, l, h;
    K kind;
    OpCounts expected;
  };
  // Evaluated by hand from the closed forms.
  const Row rows[] = {
      {10, 10, 3, K::lms, {21, 20, 0}},    {10, 10, 3, K::lmf, {21, 20, 1}},
      {10, 10, 3, K::gmcc, {24, 21, 3}},   {10, 10, 3, K::gmee, {723, 920, 602}},
      {10, 10, 3, K::qgmee, {233, 230, 92}},
      {5, 8, 2, K::lms, {11, 10, 0}},      {5, 8, 2, K::lmf, {11, 10, 1}},
      {5, 8, 2, K::gmcc, {14, 11, 3}},     {5, 8, 2, K::gmee, {437, 562, 386}},
      {5, 8, 2, K::qgmee, {112, 109, 50}},
      {1, 2, 1, K::lms, {3, 2, 0}},        {1, 2, 1, K::lmf, {3, 2, 1}},
      {1, 2, 1, K::gmcc, {6, 3, 3}},       {1, 2, 1, K::gmee, {31, 36, 26}},
      {1, 2, 1, K::qgmee, {14, 11, 8}},
  };
  for (const Row& r : rows) {
    CAPTURE(to_string(r.kind));
    CAPTURE(r.m);
    CHECK(complexity_counts(r.kind, r.m, r.l, r.h) == r.expected);
  }
}

TEST_CASE("complexity counts reject uncovered inputs") {
  CHECK_THROWS_AS(complexity_counts(AlgorithmKind::mee, 10, 10, 3), InvalidParameter);
  CHECK_THROWS_AS(complexity_counts(AlgorithmKind::rls, 10, 10, 3), InvalidParameter);
  CHECK_THROWS_AS(complexity_counts(AlgorithmKind::qgmee, 10, 4, 5), InvalidParameter);
  CHECK_THROWS_AS(complexity_counts(AlgorithmKind::qgmee, 10, 4, 0), InvalidParameter);
  CHECK_THROWS_AS(complexity_counts(AlgorithmKind::lms, 0, 4, 1), InvalidParameter);
}

TEST_CASE("quantized closed form stays below the full form for H at most L/2") {
  for (std::uint64_t m = 1; m <= 32; m *= 2) {
    for (std::uint64_t l = 2; l <= 40; ++l) {
      for (std::uint64_t h = 1; 2 * h <= l; ++h) {
        const OpCounts q = complexity_counts(AlgorithmKind::qgmee, m, l, h);
        const OpCounts g = complexity_counts(AlgorithmKind::gmee, m, l, h);
        REQUIRE(q.multiplications < g.multiplications);
        REQUIRE(q.additions < g.additions);
        REQUIRE(q.exponentiations < g.exponentiations);
      }
    }
  }
}

TEST_CASE("steady P and Q are mirrored and balanced") {
  Rng rng(4);
  const SteadyStateVectors pq = estimate_steady_pq(mixed_inputs(), 5000, rng);
  CHECK(pq.sample_count == 5000);
  CHECK(pq.p_tilde.size() == 10);
  CHECK((pq.p_tilde + pq.q_tilde).cwiseAbs().maxCoeff() <= 1e-15);
  // sum_i p_i = sum_ij f(v_i - v_j) = 0 by oddness, window by window.
  CHECK(std::abs(pq.p_tilde.sum()) <= 1e-13);
  // Differences of i.i.d. draws are symmetric, so every E[p_i] is zero.
  CHECK(pq.p_tilde.cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("steady estimators validate their inputs") {
  Rng rng(1);
  CHECK_THROWS_AS(estimate_steady_pq(mixed_inputs(), 999, rng), InvalidParameter);
  CHECK_THROWS_AS(estimate_steady_lambda(mixed_inputs(), 0.1, 10, rng), InvalidParameter);
  TheoryInputs bad = mixed_inputs();
  bad.window = 1;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
  bad = mixed_inputs();
  bad.input_variance = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
  bad = mixed_inputs();
  bad.eta = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
}

TEST_CASE("lambda at zero threshold equals P on the same draws") {
  Rng a(9);
  Rng b(9);
  const TheoryInputs in = mixed_inputs();
  const SteadyStateVectors pq = estimate_steady_pq(in, 2000, a);
  const Eigen::VectorXd lambda = estimate_steady_lambda(in, 0.0, 2000, b);
  CHECK((lambda - pq.p_tilde).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("step bound by hand") {
  TheoryInputs in;
  in.kernel = GgdKernel(2.0, 1.5);
  in.window = 2;
  in.order = 3;
  in.input_variance = 0.5;
  Eigen::VectorXd p(2);
  p << 0.2, -0.2;
  Eigen::VectorXd eps(2);
  eps << 0.3, -0.1;
  // p - q = 2p = (0.4, -0.4); eps . (p - q) = 0.16; ||p - q||^2 = 0.32.
  const double expected = 2.0 * 4.0 * 2.25 * 0.16 / (2.0 * 3.0 * 0.5 * 0.32);
  const StepBound b = gmee_step_bound(in, eps, from_p(p));
  REQUIRE(b.bounded());
  CHECK(*b.value == doctest::Approx(expected).epsilon(1e-14));

  // Opposite correlation: the bound carries no information.
  CHECK_FALSE(gmee_step_bound(in, -eps, from_p(p)).bounded());
  // Zero P: degenerate denominator.
  CHECK_FALSE(gmee_step_bound(in, eps, from_p(Eigen::VectorXd::Zero(2))).bounded());
  CHECK_THROWS_AS(gmee_step_bound(in, Eigen::VectorXd::Zero(3), from_p(p)), DimensionMismatch);
}

TEST_CASE("conservative bound uses the Cauchy-Schwarz ceiling") {
  TheoryInputs in = mixed_inputs();
  in.window = 4;
  Eigen::VectorXd p(4);
  p << 0.1, 0.3, -0.25, -0.15;
  const SteadyStateVectors pq = from_p(p);
  const double sd = std::sqrt(5.0095);
  const Eigen::VectorXd eps = sd * (2.0 * p).normalized() * 2.0;  // ||eps|| = sqrt(L) sigma_v
  const StepBound tight = gmee_step_bound(in, eps, pq);
  const StepBound ceiling = conservative_gmee_step_bound(in, pq);
  REQUIRE(tight.bounded());
  REQUIRE(ceiling.bounded());
  CHECK(*tight.value == doctest::Approx(*ceiling.value).epsilon(1e-12));
  // Any a priori error of that norm gives a bound no larger than the ceiling.
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    Eigen::VectorXd e = gaussian_input(4, rng);
    e = e.normalized() * 2.0 * sd;
    const StepBound s = gmee_step_bound(in, e, pq);
    if (s.bounded()) {
      CHECK(*s.value <= *ceiling.value * (1 + 1e-12));
    }
  }
}

TEST_CASE("quantized bound matches the full bound at zero threshold") {
  TheoryInputs in = mixed_inputs();
  Rng a(15);
  Rng b(15);
  const SteadyStateVectors pq = estimate_steady_pq(in, 3000, a);
  const Eigen::VectorXd lambda = estimate_steady_lambda(in, 0.0, 3000, b);
  const Eigen::VectorXd eps = pq.p_tilde * 4.0 + Eigen::VectorXd::Constant(10, 1e-3);
  const StepBound g = gmee_step_bound(in, eps, pq);
  const StepBound q = qgmee_step_bound(in, eps, lambda);
  REQUIRE(g.bounded());
  REQUIRE(q.bounded());
  CHECK(*q.value == doctest::Approx(*g.value).epsilon(1e-9));
}

TEST_CASE("emse prediction formula and step-size scaling") {
  TheoryInputs in;
  in.kernel = GgdKernel(3.0, 2.0);
  in.window = 5;
  in.order = 4;
  in.input_variance = 2.0;
  in.eta = 0.1;
  Eigen::VectorXd p = Eigen::VectorXd::LinSpaced(5, -0.2, 0.2);
  const SteadyStateVectors pq = from_p(p);
  const double norm2 = (2.0 * p).squaredNorm();
  const double expected =
      0.01 * 9.0 * 16.0 * 4.0 / (4.0 * std::pow(5.0, 5) * std::pow(8.0, 2)) * norm2;
  CHECK(emse_theory(in, pq) == doctest::Approx(expected).epsilon(1e-14));
  TheoryInputs doubled = in;
  doubled.eta = 0.2;
  CHECK(emse_theory(doubled, pq) == doctest::Approx(4.0 * expected).epsilon(1e-14));
  CHECK(emse_theory(in, from_p(Eigen::VectorXd::Zero(5))) == 0.0);
}

TEST_CASE("bound scales inversely with order and input variance, linearly with beta^alpha") {
  TheoryInputs in = mixed_inputs();
  in.window = 3;
  Eigen::VectorXd p(3);
  p << 0.3, -0.1, -0.2;
  Eigen::VectorXd eps(3);
  eps << 0.2, 0.1, -0.1;
  const double base = *gmee_step_bound(in, eps, from_p(p)).value;
  TheoryInputs m2 = in;
  m2.order *= 2;
  CHECK(*gmee_step_bound(m2, eps, from_p(p)).value == doctest::Approx(base / 2).epsilon(1e-14));
  TheoryInputs s2 = in;
  s2.input_variance *= 2;
  CHECK(*gmee_step_bound(s2, eps, from_p(p)).value == doctest::Approx(base / 2).epsilon(1e-14));

  const double q_base = *qgmee_step_bound(in, eps, p).value;
  TheoryInputs wide = in;
  wide.kernel = GgdKernel(2.0, 3.0);
  CHECK(*qgmee_step_bound(wide, eps, p).value == doctest::Approx(q_base * 9.0).epsilon(1e-14));
  CHECK_FALSE(qgmee_step_bound(in, eps, Eigen::VectorXd::Zero(3)).bounded());
}

TEST_CASE("all-equal noise gives exactly zero P and Q") {
  TheoryInputs in = mixed_inputs();
  in.noise = NoiseModel::bernoulli_rayleigh(0.0, 1.0);
  Rng rng(2);
  const SteadyStateVectors pq = estimate_steady_pq(in, 1000, rng);
  CHECK(pq.p_tilde.isZero(0.0));
  CHECK(pq.q_tilde.isZero(0.0));
  CHECK(emse_theory(in, pq) == 0.0);
}

TEST_CASE("steady P standard error shrinks like one over root samples") {
  const TheoryInputs in = mixed_inputs();
  // Spread of the estimate across seeds at n and 4n samples.
  auto spread = [&](std::size_t samples) {
    double sum_sq = 0.0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      Rng rng(1000 + seed);
      sum_sq += estimate_steady_pq(in, samples, rng).p_tilde.squaredNorm();
    }
    return std::sqrt(sum_sq / 40.0);
  };
  const double ratio = spread(1000) / spread(4000);
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("emse prediction is nonnegative and increasing in the step size") {
  TheoryInputs in = mixed_inputs();
  Rng rng(6);
  const SteadyStateVectors pq = estimate_steady_pq(in, 2000, rng);
  double prev = 0.0;
  for (double eta : {0.001, 0.005, 0.01, 0.02, 0.06}) {
    in.eta = eta;
    const double e = emse_theory(in, pq);
    CHECK(e > prev);
    prev = e;
  }
}
