#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "gmee/error.hpp"
#include "gmee/information_potential.hpp"
#include "gmee/kernels.hpp"
#include "gmee/quantizer.hpp"
#include "gmee/special_functions.hpp"

using namespace gmee;

namespace {

std::vector<double> random_errors(std::mt19937_64& gen, std::size_t n, double scale) {
  std::normal_distribution<double> dist(0.0, scale);
  std::vector<double> e(n);
  for (double& x : e) {
    x = dist(gen);
  }
  return e;
}

}  // namespace

TEST_CASE("lanczos gamma agrees with tgamma to 1e-10 relative on [0.05, 20]") {
  double worst = 0.0;
  for (double x = 0.05; x <= 20.0; x += 0.0125) {
    worst = std::max(worst, std::abs(lanczos_gamma(x) / std::tgamma(x) - 1.0));
  }
  CHECK(worst <= 1e-10);
  CHECK(lanczos_gamma(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lanczos_gamma(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
}

TEST_CASE("gaussian kernel values") {
  CHECK(gaussian_kernel(0.0, 1.0) == doctest::Approx(0.398942).epsilon(1e-6));
  CHECK(gaussian_kernel(1.0, 1.0) == doctest::Approx(0.241971).epsilon(1e-6));
  CHECK(gaussian_kernel(1.0, 1.0) == doctest::Approx(oracle::gauss(1.0, 1.0)).epsilon(1e-15));
  for (double x : {0.1, 0.7, 2.5}) {
    CHECK(gaussian_kernel(x, 0.8) == gaussian_kernel(-x, 0.8));
    CHECK(gaussian_kernel(x, 0.8) > 0.0);
  }
  CHECK_THROWS_AS(gaussian_kernel(0.0, 0.0), InvalidParameter);
  CHECK_THROWS_AS(gaussian_kernel(0.0, -1.0), InvalidParameter);
}

TEST_CASE("ggd kernel peak values and symmetry") {
  CHECK(GgdKernel(1.0, 1.0)(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(GgdKernel(2.0, 1.0)(0.0) == doctest::Approx(0.564190).epsilon(1e-6));
  const GgdKernel k(3.3, 0.7);
  CHECK(k(0.0) == doctest::Approx(k.norm_const()).epsilon(1e-15));
  for (double x : {0.01, 0.3, 1.7, 9.0}) {
    CHECK(k(x) == k(-x));
    CHECK(k(x) <= k(0.0));
    CHECK(k(x) == doctest::Approx(oracle::ggd(x, 3.3, 0.7)).epsilon(1e-10));
  }
}

TEST_CASE("ggd kernel rejects shape below 1 and non-positive scale") {
  CHECK_THROWS_AS(GgdKernel(0.5, 1.0), InvalidParameter);
  CHECK_THROWS_AS(GgdKernel(2.0, 0.0), InvalidParameter);
  GgdKernel k(2.0, 1.0);
  CHECK_THROWS_AS(k.set_alpha(0.99), InvalidParameter);
  CHECK_THROWS_AS(k.set_beta(-2.0), InvalidParameter);
}

TEST_CASE("ggd normalization constant follows parameter changes") {
  GgdKernel k(2.0, 1.0);
  k.set_alpha(4.0);
  CHECK(k.norm_const() == doctest::Approx(4.0 / (2.0 * std::tgamma(0.25))).epsilon(1e-10));
  k.set_beta(2.0);
  CHECK(k.norm_const() == doctest::Approx(4.0 / (4.0 * std::tgamma(0.25))).epsilon(1e-10));
  CHECK(k.beta_pow_alpha() == doctest::Approx(16.0));
}

TEST_CASE("ggd kernel integrates to one") {
  for (double alpha : {1.0, 2.0, 4.0, 8.0}) {
    for (double beta : {0.5, 1.0, 5.0}) {
      const GgdKernel k(alpha, beta);
      const double area = oracle::simpson([&](double x) { return k(x); }, -50 * beta, 50 * beta,
                                          400000);
      CAPTURE(alpha);
      CAPTURE(beta);
      CHECK(std::abs(area - 1.0) <= 1e-6);
    }
  }
}

TEST_CASE("influence is odd and vanishes at zero") {
  for (double alpha : {1.0, 1.5, 2.0, 5.0}) {
    const GgdKernel k(alpha, 1.3);
    CHECK(k.influence(0.0) == 0.0);
    for (double x : {1e-3, 0.4, 2.0, 7.5}) {
      CHECK(k.influence(-x) == -k.influence(x));
      CHECK(k.influence(x) == doctest::Approx(oracle::influence(x, alpha, 1.3)).epsilon(1e-12));
    }
  }
}

TEST_CASE("parzen density estimate") {
  const GgdKernel k(2.0, 1.0);
  const std::vector<double> one{0.0};
  CHECK(parzen_pdf(one, k, 0.0) == doctest::Approx(k(0.0)));
  const std::vector<double> pair{-0.6, 0.6};
  CHECK(parzen_pdf(pair, k, 0.0) == doctest::Approx(k(0.6)).epsilon(1e-15));
  const std::vector<double> three{0.1, 0.3, -0.2};
  const double hand = (oracle::ggd(-0.1, 2, 1) + oracle::ggd(-0.3, 2, 1) + oracle::ggd(0.2, 2, 1)) / 3;
  CHECK(parzen_pdf(three, k, 0.0) == doctest::Approx(hand).epsilon(1e-12));
  const double area =
      oracle::simpson([&](double x) { return parzen_pdf(three, k, x); }, -60, 60, 200000);
  CHECK(std::abs(area - 1.0) <= 1e-6);
  CHECK_THROWS_AS(parzen_pdf(std::vector<double>{}, k, 0.0), InvalidInput);
}

TEST_CASE("quadratic information potential") {
  const std::vector<double> e01{0.0, 1.0};
  CHECK(quadratic_ip(e01, 1.0) == doctest::Approx(0.320457).epsilon(1e-6));
  const std::vector<double> same(7, 0.42);
  CHECK(quadratic_ip(same, 0.3) == doctest::Approx(gaussian_kernel(0.0, 0.3)).epsilon(1e-15));
  CHECK_THROWS_AS(quadratic_ip(std::vector<double>{}, 1.0), InvalidInput);
  CHECK_THROWS_AS(quadratic_ip(e01, 0.0), InvalidParameter);
}

TEST_CASE("generalized information potential against brute force") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 50; ++trial) {
    const double alpha = 1.0 + 7.0 * std::generate_canonical<double, 53>(gen);
    const double beta = 0.5 + 4.5 * std::generate_canonical<double, 53>(gen);
    const auto e = random_errors(gen, 2 + trial % 15, 1.0);
    const GgdKernel k(alpha, beta);
    const double ip = generalized_ip(e, k);
    CHECK(ip == doctest::Approx(oracle::generalized_ip(e, alpha, beta)).epsilon(1e-10));
    CHECK(ip > 0.0);
    CHECK(ip <= k(0.0));
  }
  const GgdKernel k(3.0, 0.8);
  const std::vector<double> two{0.9, -0.25};
  CHECK(generalized_ip(two, k) == doctest::Approx((2 * k(0.0) + 2 * k(1.15)) / 4).epsilon(1e-14));
  const std::vector<double> equal(5, -1.5);
  CHECK(generalized_ip(equal, k) == doctest::Approx(k(0.0)).epsilon(1e-15));
}

TEST_CASE("generalized potential at alpha 2 is a rescaled quadratic potential") {
  std::mt19937_64 gen(11);
  for (double beta : {0.5, 1.0, 3.0}) {
    const auto e = random_errors(gen, 12, 1.0);
    const GgdKernel k(2.0, beta);
    const double sigma = beta / std::numbers::sqrt2;
    const double ratio = k.norm_const() / gaussian_kernel(0.0, sigma);
    CHECK(generalized_ip(e, k) == doctest::Approx(ratio * quadratic_ip(e, sigma)).epsilon(1e-12));
  }
}

TEST_CASE("information potentials are permutation invariant") {
  std::mt19937_64 gen(5);
  const GgdKernel k(2.5, 1.1);
  for (int trial = 0; trial < 20; ++trial) {
    auto e = random_errors(gen, 9, 2.0);
    const double g0 = generalized_ip(e, k);
    const double q0 = quadratic_ip(e, 0.7);
    const double z0 = quantized_ip(e, quantize(e, 0.0), k);
    std::shuffle(e.begin(), e.end(), gen);
    CHECK(generalized_ip(e, k) == doctest::Approx(g0).epsilon(1e-14));
    CHECK(quadratic_ip(e, 0.7) == doctest::Approx(q0).epsilon(1e-14));
    CHECK(quantized_ip(e, quantize(e, 0.0), k) == doctest::Approx(z0).epsilon(1e-14));
  }
}

TEST_CASE("ip upper bound is attained only when errors coincide") {
  const GgdKernel k(2.0, 1.0);
  std::vector<double> e(6, 0.3);
  CHECK(generalized_ip(e, k) == doctest::Approx(k(0.0)).epsilon(1e-15));
  e[2] += 1e-3;
  CHECK(generalized_ip(e, k) < k(0.0));
}

TEST_CASE("renyi entropy") {
  CHECK(renyi_entropy(1.0, 2.0) == 0.0);
  CHECK(renyi_entropy(1.0, 0.5) == 0.0);
  CHECK(renyi_entropy(0.5, 2.0) == doctest::Approx(0.693147).epsilon(1e-6));
  double previous = renyi_entropy(0.01, 2.0);
  for (double ip = 0.02; ip < 3.0; ip += 0.01) {
    const double h = renyi_entropy(ip, 2.0);
    CHECK(h < previous);
    previous = h;
  }
  CHECK_THROWS_AS(renyi_entropy(0.0, 2.0), InvalidParameter);
  CHECK_THROWS_AS(renyi_entropy(-1.0, 2.0), InvalidParameter);
  CHECK_THROWS_AS(renyi_entropy(0.5, 1.0), InvalidParameter);
}

TEST_CASE("online quantizer hand trace") {
  const std::vector<double> e{0.1, 0.15, 0.9};
  const Codebook cb = quantize(e, 0.1);
  CHECK(cb.centers == std::vector<double>{0.1, 0.9});
  CHECK(cb.counts == std::vector<std::size_t>{2, 1});
  CHECK(cb.gamma == 0.1);
}

TEST_CASE("quantizer tie goes to the earlier center") {
  // 0.5 is exactly 0.25 from both centers.
  const std::vector<double> e{0.25, 0.75, 0.5};
  const Codebook cb = quantize(e, 0.25);
  REQUIRE(cb.size() == 2);
  CHECK(cb.counts == std::vector<std::size_t>{2, 1});
}

TEST_CASE("quantizer extremes") {
  std::mt19937_64 gen(8);
  auto e = random_errors(gen, 30, 1.0);
  const Codebook zero = quantize(e, 0.0);
  CHECK(zero.size() == e.size());
  CHECK(std::all_of(zero.counts.begin(), zero.counts.end(), [](auto c) { return c == 1; }));

  const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
  const Codebook wide = quantize(e, 10.0 * (*hi - *lo));
  REQUIRE(wide.size() == 1);
  CHECK(wide.centers[0] == e[0]);
  CHECK(wide.counts[0] == e.size());
  const GgdKernel k(2.0, 1.0);
  CHECK(std::isfinite(quantized_ip(e, wide, k) - generalized_ip(e, k)));

  CHECK_THROWS_AS(quantize(e, -0.1), InvalidParameter);
  CHECK_THROWS_AS(quantize(std::vector<double>{}, 0.1), InvalidInput);
}

TEST_CASE("quantizer invariants on random inputs") {
  std::mt19937_64 gen(21);
  std::uniform_int_distribution<std::size_t> len(1, 200);
  std::uniform_real_distribution<double> gam(0.0, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto e = random_errors(gen, len(gen), 1.5);
    const double gamma = gam(gen);
    const Codebook cb = quantize(e, gamma);
    CHECK(cb.total() == e.size());
    CHECK(cb.centers.size() == cb.counts.size());
    CHECK(cb.size() <= e.size());
    for (std::size_t a = 0; a < cb.size(); ++a) {
      for (std::size_t b = a + 1; b < cb.size(); ++b) {
        CHECK(std::abs(cb.centers[a] - cb.centers[b]) > gamma);
      }
    }
  }
}

TEST_CASE("quantized potential") {
  std::mt19937_64 gen(4);
  const GgdKernel k(2.7, 0.9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto e = random_errors(gen, 2 + trial, 1.0);
    const double exact = generalized_ip(e, k);
    CHECK(std::abs(quantized_ip(e, quantize(e, 0.0), k) - exact) <= 1e-15 * exact);
  }

  const std::vector<double> same(4, 0.2);
  CHECK(quantized_ip(same, quantize(same, 0.5), k) == doctest::Approx(k(0.0)).epsilon(1e-15));

  // Three errors against two centers: six explicit terms.
  const std::vector<double> e{0.1, 0.15, 0.9};
  const Codebook cb = quantize(e, 0.1);
  double brute = 0.0;
  for (double x : e) {
    brute += 2.0 * oracle::ggd(x - 0.1, 2.7, 0.9) + 1.0 * oracle::ggd(x - 0.9, 2.7, 0.9);
  }
  CHECK(quantized_ip(e, cb, k) == doctest::Approx(brute / 9.0).epsilon(1e-10));

  Codebook broken = cb;
  broken.counts[0] = 5;
  CHECK_THROWS_AS(quantized_ip(e, broken, k), ConsistencyError);
}
