#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ffire/errors.hpp"
#include "ffire/exact.hpp"
#include "ffire/quadrature.hpp"
#include "ffire/special.hpp"
#include "ffire/stats.hpp"

using namespace ffire;
using namespace ffire::special;

namespace {

// Composite Gauss-Legendre on [a, b] with `panels` panels of 10 points.
template <class F>
double gauss(F&& f, double a, double b, int panels = 200) {
  static const auto rule = quad::gauss_legendre_double(10);
  const double w = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * w;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      sum += 0.5 * w * rule.weights[i] * f(lo + 0.5 * w * (1.0 + rule.nodes[i]));
    }
  }
  return sum;
}

// Same, split at the integers where rho and f have derivative jumps.
template <class F>
double gauss_by_unit(F&& f, double a, double b) {
  double sum = 0.0;
  for (double lo = a; lo < b;) {
    const double hi = std::min(b, std::floor(lo) + 1.0);
    sum += gauss(f, lo, hi, 64);
    lo = hi;
  }
  return sum;
}

}  // namespace

TEST_CASE("Dickman rho closed forms") {
  CHECK(dickman_rho(0.7) == 1.0);
  CHECK(dickman_rho(1.0) == 1.0);
  CHECK(dickman_rho(2.0) == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-14));
  CHECK(std::abs(dickman_rho(2.0) - 0.3068528) < 1e-7);
  CHECK(dickman_rho(1.5) == doctest::Approx(1.0 - std::log(1.5)).epsilon(1e-14));
  CHECK_THROWS_AS(dickman_rho(-0.1), DomainError);
}

TEST_CASE("rho(3) against an independent quadrature of the lagged density") {
  // rho(3) = rho(2) - int_2^3 (1 - log(t-1))/t dt.
  const double oracle = (1.0 - std::log(2.0)) - gauss([](double t) { return (1.0 - std::log(t - 1.0)) / t; }, 2.0, 3.0);
  CHECK(std::abs(dickman_rho(3.0) - oracle) < 1e-12);
  CHECK(std::abs(dickman_rho(3.0) - 0.0486084) < 1e-7);
  // Interior point of (2,3).
  const double x = 2.4;
  const double oracle24 =
      (1.0 - std::log(2.0)) - gauss([](double t) { return (1.0 - std::log(t - 1.0)) / t; }, 2.0, x);
  CHECK(std::abs(dickman_rho(x) - oracle24) < 1e-12);
}

TEST_CASE("Dickman density") {
  CHECK(dickman_density(1.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(dickman_density(2.5) == doctest::Approx((1.0 - std::log(1.5)) / 2.5).epsilon(1e-12));
  CHECK(std::abs(dickman_density(2.5) - 0.23781) < 1e-5);
  CHECK(dickman_density(0.5) == 0.0);
  CHECK(dickman_density(1.0) == 0.0);
}

TEST_CASE("Dickman table invariants") {
  const auto& t = default_dickman_table();
  CHECK(t.step() == 1.0 / 1024.0);
  CHECK(t.x_max() >= 30.0);
  for (std::size_t j = 1; j < t.node_count(); ++j) {
    if (t.node(j) <= 1.0) {
      CHECK(t.node_value(j) == 1.0);
      continue;
    }
    CHECK(t.node_value(j) > 0.0);
    CHECK(t.node_value(j) < t.node_value(j - 1));
  }
  for (std::size_t j = 0; j < t.node_count(); ++j) {
    const double x = t.node(j);
    if (x >= 1.0 && x <= 10.0) CHECK(t.node_value(j) <= std::exp(-std::lgamma(x + 1.0)) * (1.0 + 1e-14));
  }
  CHECK_THROWS_AS(t.rho(t.x_max() + 1.0), DomainError);
  CHECK_THROWS_AS(DickmanTable::build(10.0, 1000), std::invalid_argument);
}

TEST_CASE("delay equation residual") {
  const auto& t = default_dickman_table();
  const double h = t.step();
  // Five-point centred differences on node values, away from the integers
  // where rho'' jumps.
  double worst = 0.0;
  for (std::size_t j = 1024 + 8; j + 8 < 10 * 1024; ++j) {
    if (j % 1024 < 4 || j % 1024 > 1020) continue;
    const double d = (t.node_value(j - 2) - 8.0 * t.node_value(j - 1) + 8.0 * t.node_value(j + 1) -
                      t.node_value(j + 2)) /
                     (12.0 * h);
    const double x = t.node(j);
    worst = std::max(worst, std::abs(x * d + t.rho(x - 1.0)));
  }
  CHECK(worst <= 1e-8);
  // Interpolant derivative at step midpoints.
  double worst_mid = 0.0;
  for (double x = 1.0 + 0.5 * h; x < 10.0; x += h) {
    worst_mid = std::max(worst_mid, std::abs(x * t.rho_derivative(x) + t.rho(x - 1.0)));
  }
  CHECK(worst_mid <= 1e-8);
}

TEST_CASE("refining the grid changes rho by O(h^4)") {
  const auto coarse = DickmanTable::build(12.0, 128);
  const auto& fine = default_dickman_table();
  double diff = 0.0;
  for (double x = 2.0; x <= 12.0; x += 0.125) diff = std::max(diff, std::abs(coarse.rho(x) - fine.rho(x)));
  CHECK(diff < 1e-9);
}

TEST_CASE("normalisation of the density and of rho") {
  const auto& t = default_dickman_table();
  const double mass = gauss_by_unit([&](double x) { return t.density(x); }, 1.0, t.x_max());
  CHECK(std::abs(mass - 1.0) <= 1e-8);
  CHECK(std::abs(t.integral_rho(t.x_max()) - std::exp(kEulerGamma)) <= 1e-6);
  // Cumulative integral matches direct quadrature of the interpolant.
  CHECK(std::abs(t.integral_rho(4.3) - gauss_by_unit([&](double x) { return t.rho(x); }, 0.0, 4.3)) < 1e-12);
  CHECK(t.integral_rho(2.0) == doctest::Approx(3.0 - 2.0 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("tables extend beyond the default range") {
  const auto wide = DickmanTable::build(40.0);
  CHECK(dickman_rho(35.0) == doctest::Approx(wide.rho(35.0)).epsilon(1e-12));
  CHECK(dickman_rho(35.0) > 0.0);
}

TEST_CASE("exponential integrals") {
  // E1(z) + log z + gamma = int_0^z (1 - e^{-t})/t dt.
  const double z = 1.0;
  const double lhs = expint_E1(z) + std::log(z) + kEulerGamma;
  const double rhs = gauss([](double t) { return -std::expm1(-t) / t; }, 0.0, z);
  CHECK(std::abs(lhs - rhs) < 1e-10);

  // Ei(x) = gamma + log x + int_0^x (e^t - 1)/t dt, the principal value.
  const double ei_oracle = kEulerGamma + std::log(0.5) + gauss([](double t) { return std::expm1(t) / t; }, 0.0, 0.5);
  CHECK(std::abs(expint_Ei(0.5) - ei_oracle) < 1e-13);
  CHECK(std::abs(expint_Ei(0.5) - 0.454220) < 1e-6);

  // Ei(-z) ~ -e^{-z}/z (1 - 1/z + 2/z^2 - 6/z^3 + ...).
  const double asym = -std::exp(-10.0) / 10.0 * (1 - 0.1 + 0.02 - 0.006 + 0.0024 - 0.0012);
  CHECK(std::abs(expint_Ei(-10.0)) < 5e-6);
  CHECK(expint_Ei(-10.0) == doctest::Approx(asym).epsilon(2e-3));
  CHECK(expint_E1(10.0) == doctest::Approx(4.156968929685324e-06).epsilon(1e-12));

  // Continuity across the switch between series and continued fraction.
  CHECK(expint_Ei(-4.0 - 1e-12) == doctest::Approx(expint_Ei(-4.0 + 1e-12)).epsilon(1e-12));
  CHECK(expint_E1(4.0) == doctest::Approx(0.003779352409848906).epsilon(1e-13));

  CHECK_THROWS_AS(expint_Ei(0.0), DomainError);
  CHECK_THROWS_AS(expint_E1(0.0), DomainError);
}

TEST_CASE("limit MGF") {
  CHECK(limit_mgf(0.0) == 1.0);
  CHECK_THROWS_AS(limit_mgf(1.0), DomainError);
  // E e^{-xi} = int e^{-x} f(x) dx over the density.
  const auto& t = default_dickman_table();
  const double oracle = gauss_by_unit([&](double x) { return std::exp(-x) * t.density(x); }, 1.0, t.x_max());
  CHECK(std::abs(limit_mgf(-1.0) - oracle) < 1e-6);
  const double oracle_half = gauss_by_unit([&](double x) { return std::exp(0.5 * x) * t.density(x); }, 1.0, t.x_max());
  CHECK(std::abs(limit_mgf(0.5) - oracle_half) < 1e-6);
  // E xi = e^gamma from the one-sided difference at 0.
  const double h = 1e-7;
  CHECK((limit_mgf(0.0) - limit_mgf(-h)) / h == doctest::Approx(std::exp(kEulerGamma)).epsilon(1e-5));
  CHECK(std::abs(std::exp(kEulerGamma) - 1.78107) < 1e-5);
}

TEST_CASE("finite-n MGF converges to the limit MGF") {
  for (double s : {-1.0, -0.5, 0.25, 0.5}) {
    double previous = 1e9;
    for (std::size_t n : {100u, 1000u}) {
      const double t = s / std::log(static_cast<double>(n));
      const double phi = exact::mgf(n, BigReal(t, 64)).to_double();
      const double err = std::abs(phi - limit_mgf(s));
      CHECK(err < previous);
      previous = err;
    }
  }
}

TEST_CASE("GD(1) CDF") {
  CHECK(gd1_cdf(0.0) == 0.0);
  CHECK(gd1_cdf(1.0) == doctest::Approx(std::exp(-kEulerGamma)).epsilon(1e-14));
  CHECK(std::abs(gd1_cdf(1.0) - 0.56146) < 1e-5);
  CHECK(gd1_cdf(15.0) >= 1.0 - 1e-9);
  CHECK(gd1_cdf(15.0) <= 1.0 + 1e-9);
  double prev = 0.0;
  for (double x = 0.0; x <= 10.0; x += 0.01) {
    const double v = gd1_cdf(x);
    CHECK(v >= prev);
    CHECK(v <= 1.0 + 1e-12);
    prev = v;
  }
  CHECK_THROWS_AS(gd1_cdf(-1.0), DomainError);
}

TEST_CASE("GD(1) sampler") {
  const auto xs = gd1_samples(100'000, {31, 0});
  for (double x : xs) CHECK(x > 0.0);
  const stats::SampleSummary s(xs);
  CHECK(std::abs(s.mean() - 1.0) <= 0.01);
  // X = U(1 + X') gives E X^2 = 3/2, so Var X = 1/2.
  CHECK(s.variance() == doctest::Approx(0.5).epsilon(0.03));
  const auto& t = default_dickman_table();
  CHECK(stats::ks_statistic_sorted(s.sorted(), [&](double x) { return x <= 0 ? 0.0 : gd1_cdf(t, std::min(x, t.x_max())); }) <=
        0.01);
  GD1Spec bad;
  bad.epsilon = 1.0;
  Rng rng({1, 0});
  CHECK_THROWS_AS(gd1_sample(rng, bad), DomainError);
}
