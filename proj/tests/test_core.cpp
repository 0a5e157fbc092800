#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gooed/problems.hpp"
#include "gooed/types.hpp"

using namespace gooed;

namespace {

// Simple quadrature + statistics oracles used to freeze expected values.
double sample_mean(const std::vector<Vector>& s, std::size_t k) {
  double m = 0.0;
  for (const auto& v : s) m += v[k];
  return m / static_cast<double>(s.size());
}

double sample_var(const std::vector<Vector>& s, std::size_t k) {
  const double m = sample_mean(s, k);
  double acc = 0.0;
  for (const auto& v : s) acc += (v[k] - m) * (v[k] - m);
  return acc / static_cast<double>(s.size() - 1);
}

double sample_corr(const std::vector<Vector>& s) {
  const double m0 = sample_mean(s, 0), m1 = sample_mean(s, 1);
  double c01 = 0.0, c00 = 0.0, c11 = 0.0;
  for (const auto& v : s) {
    c01 += (v[0] - m0) * (v[1] - m1);
    c00 += (v[0] - m0) * (v[0] - m0);
    c11 += (v[1] - m1) * (v[1] - m1);
  }
  return c01 / std::sqrt(c00 * c11);
}

}  // namespace

TEST_CASE("prior sampling moments") {
  RngStream rng(7);
  const auto u = sample_prior(PriorSpec::uniform_box({0.0}, {1.0}), 100000, rng);
  for (const auto& v : u) {
    REQUIRE(v[0] >= 0.0);
    REQUIRE(v[0] <= 1.0);
  }
  CHECK(sample_mean(u, 0) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::fabs(sample_mean(u, 0) - 0.5) < 0.01);

  RngStream rng2(8);
  const auto g = sample_prior(PriorSpec::gaussian_diag({0.0}, {1.0}), 100000, rng2);
  CHECK(std::fabs(sample_var(g, 0) - 1.0) < 0.03);

  RngStream rng3(9);
  const auto u2 = sample_prior(PriorSpec::uniform_box({0.0, 0.0}, {1.0, 1.0}), 10000, rng3);
  CHECK(std::fabs(sample_corr(u2)) < 0.05);
}

TEST_CASE("prior sampling is deterministic given the seed") {
  RngStream a(1234), b(1234);
  const auto sa = sample_prior(PriorSpec::uniform_box({0.0}, {1.0}), 100, a);
  const auto sb = sample_prior(PriorSpec::uniform_box({0.0}, {1.0}), 100, b);
  for (std::size_t i = 0; i < sa.size(); ++i) CHECK(sa[i][0] == sb[i][0]);
}

TEST_CASE("prior spec validation") {
  CHECK_THROWS_AS(PriorSpec::uniform_box({1.0}, {0.0}), ConfigError);
  CHECK_THROWS_AS(PriorSpec::gaussian_diag({0.0}, {0.0}), ConfigError);
  CHECK_THROWS_AS(PriorSpec::uniform_box({0.0, 0.0}, {1.0}), ConfigError);
}

TEST_CASE("bm observation model values") {
  const Problem bm = builtin_problem("bm");

  // theta = 0 annihilates both terms.
  CHECK(bm.observe({0.0}, {0.5})[0] == 0.0);

  // theta = 1, d = 0.2: 1^3 * 0.04 + 1 * exp(0) = 1.04.
  CHECK(bm.observe({1.0}, {0.2})[0] == doctest::Approx(1.04).epsilon(1e-12));

  // Noise averages out at the CLT rate.
  const double g = 0.5 * 0.5 * 0.5 * 1.0 + 0.5 * std::exp(-0.8);
  RngStream rng(11);
  double mean = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) mean += simulate_observation(bm, {0.5}, {1.0}, rng)[0];
  mean /= n;
  CHECK(std::fabs(mean - g) < 3e-4);
}

TEST_CASE("observation error propagates model blowups") {
  Problem p = builtin_problem("bm");
  p.observe = [](const Vector&, const Vector&) {
    return Vector{std::numeric_limits<double>::quiet_NaN()};
  };
  RngStream rng(1);
  CHECK_THROWS_AS(simulate_observation(p, {0.5}, {0.5}, rng), ModelEvalError);
}

TEST_CASE("log likelihood closed forms") {
  Problem p = builtin_problem("bm");

  // Zero residual, unit sd: -0.5 ln(2 pi).
  p.noise.sd = {1.0};
  p.observe = [](const Vector&, const Vector&) { return Vector{0.0}; };
  CHECK(log_likelihood(p, {0.0}, {0.5}, {0.5}) ==
        doctest::Approx(-0.9189385332046727).epsilon(1e-12));

  // One-sigma residual at sd = 0.01.
  p.noise.sd = {0.01};
  const double expected = -0.5 * std::log(2.0 * M_PI * 1e-4) - 0.5;
  CHECK(log_likelihood(p, {0.01}, {0.5}, {0.5}) == doctest::Approx(expected).epsilon(1e-12));

  // Additivity over coordinates.
  Problem p2 = builtin_problem("easom2d");
  p2.noise.sd = {1.0, 1.0};
  p2.observe = [](const Vector&, const Vector&) { return Vector{0.0, 0.0}; };
  CHECK(log_likelihood(p2, {0.0, 0.0}, {0.5, 0.5}, {0.5, 0.5}) ==
        doctest::Approx(-std::log(2.0 * M_PI)).epsilon(1e-12));
}

TEST_CASE("likelihood normalizes over y") {
  const Problem bm = builtin_problem("bm");
  const Vector theta{0.3}, d{0.7};
  const double g = bm.observe(theta, d)[0];
  const double sd = bm.noise.sd[0];
  const std::size_t nodes = 20001;
  const double lo = g - 10.0 * sd, hi = g + 10.0 * sd;
  const double h = (hi - lo) / nodes;
  double integral = 0.0;
  for (std::size_t m = 0; m < nodes; ++m) {
    const double y = lo + (m + 0.5) * h;
    integral += std::exp(log_likelihood(bm, {y}, theta, d)) * h;
  }
  CHECK(std::fabs(integral - 1.0) < 1e-6);
}

TEST_CASE("prediction model values") {
  RngStream rng(3);
  CHECK(predict_qoi(builtin_problem("t1"), {0.0}, rng)[0] == 0.0);
  CHECK(predict_qoi(builtin_problem("t2"), {0.5}, rng)[0] == 5.0);
  CHECK(predict_qoi(builtin_problem("t3"), {0.3}, rng)[0] ==
        doctest::Approx(1.9947114020071635).epsilon(1e-12));
}

TEST_CASE("t2 branch boundaries follow the printed piecewise formula") {
  const Problem t2 = builtin_problem("t2");
  const auto h = [&](double theta) { return t2.predict_mean({theta})[0]; };

  // Ties at the boundaries resolve to the non-strict (plateau) branch.
  CHECK(h(0.15) == 5.0);
  CHECK(h(0.7) == 5.0);

  // One-sided limits compared against the branch formulas as printed:
  // the left limit at 0.15 is -100*0.15 + 25 = 10 (jump of 5), the right
  // limit at 0.7 is 50*0.7 + 25 = 60 (jump of 55).
  const double eps = 1e-9;
  const double left_limit_015 = h(0.15 - eps);
  const double right_limit_07 = h(0.7 + eps);
  CHECK(left_limit_015 == doctest::Approx(-100.0 * 0.15 + 25.0).epsilon(1e-6));
  CHECK(std::fabs(left_limit_015 - h(0.15)) == doctest::Approx(5.0).epsilon(1e-6));
  CHECK(right_limit_07 == doctest::Approx(50.0 * 0.7 + 25.0).epsilon(1e-6));
  CHECK(std::fabs(right_limit_07 - h(0.7)) == doctest::Approx(55.0).epsilon(1e-6));
}

TEST_CASE("builtin problem registry") {
  const Problem bm = builtin_problem("bm");
  CHECK(bm.n_theta == 1);
  CHECK(bm.n_y == 1);
  CHECK(bm.n_d == 1);
  CHECK(bm.n_z == 1);
  CHECK(bm.predict_is_identity);
  CHECK(bm.noise.sd[0] == 1e-2);

  CHECK(builtin_problem("rosenbrock2d").predict_mean({1.0, 1.0})[0] == 0.0);

  const Problem nd = builtin_problem("ndim", 3);
  CHECK(nd.n_theta == 3);
  CHECK(nd.n_y == 3);
  CHECK(nd.n_d == 3);
  CHECK(nd.n_z == 1);
  CHECK(nd.predict_mean({1.0, 1.0, 1.0})[0] == 0.0);

  CHECK_THROWS_AS(builtin_problem("nope"), ConfigError);
}

TEST_CASE("ndim with N=1 degenerates to the single-term model") {
  const Problem nd = builtin_problem("ndim", 1);
  for (double theta : {0.0, 0.3, 0.8, 1.0}) {
    for (double d : {0.0, 0.4, 1.0}) {
      CHECK(nd.observe({theta}, {d})[0] ==
            doctest::Approx(theta * theta * theta * d * d).epsilon(1e-14));
    }
    CHECK(nd.predict_mean({theta})[0] ==
          doctest::Approx((1.0 - theta) * (1.0 - theta)).epsilon(1e-14));
  }
}

TEST_CASE("prediction noise is additive when declared") {
  Problem p = builtin_problem("bm");
  p.prediction_noise_sd = Vector{0.5};
  RngStream rng(21);
  double mean = 0.0, var = 0.0;
  const int n = 20000;
  std::vector<double> zs(n);
  for (int i = 0; i < n; ++i) {
    zs[i] = predict_qoi(p, {0.25}, rng)[0];
    mean += zs[i];
  }
  mean /= n;
  for (double z : zs) var += (z - mean) * (z - mean);
  var /= n - 1;
  CHECK(std::fabs(mean - 0.25) < 0.02);
  CHECK(std::fabs(var - 0.25) < 0.02);
}
