#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "ffire/bigreal.hpp"
#include "ffire/errors.hpp"
#include "ffire/exact.hpp"

using namespace ffire;
using namespace ffire::exact;

namespace {

double rel(const BigReal& a, const BigReal& b) { return abs((a - b) / b).to_double(); }

BigReal R(double v, mpfr_prec_t bits = 256) { return BigReal(v, bits); }

constexpr double kGamma = 0.57721566490153286060651209008240243;

}  // namespace

TEST_CASE("u_recursive at small orders") {
  CHECK(u_recursive(0, R(0.5)).to_double() == doctest::Approx(1.0).epsilon(1e-15));
  // u_1(t) = t(2-t)/(1-t)^2.
  CHECK(u_recursive(1, R(0.5)).to_double() == doctest::Approx(3.0).epsilon(1e-15));
  // u_2(t) = t(2-t)^3 / ((1-t)^3 (3-t)).
  CHECK(u_recursive(2, R(0.5)).to_double() == doctest::Approx(5.4).epsilon(1e-15));
  CHECK_THROWS_AS(u_recursive(3, R(1.0)), DomainError);
  CHECK_THROWS_AS(u_recursive(3, R(1.5)), DomainError);
}

TEST_CASE("factored exponents") {
  const auto f1 = u_factored(1);
  CHECK(f1.exponent(1) == -2);
  CHECK(f1.exponent(2) == 1);
  const auto f2 = u_factored(2);
  CHECK(f2.exponent(1) == -3);
  CHECK(f2.exponent(2) == 3);
  CHECK(f2.exponent(3) == -1);
  CHECK_THROWS_AS(f2.exponent(4), std::out_of_range);
  for (std::size_t n : {0u, 1u, 7u, 40u, 200u}) {
    const auto f = u_factored(n);
    BigInt total = 0;
    for (const auto& e : f.exponents()) total += e;
    CHECK(total == -1);
  }
  CHECK(binomial(201, 100) == BigInt("180200509365116430834121184084894227116588341829287927773320"));
}

TEST_CASE("closed form agrees with the recursion") {
  const double ts[] = {-2.0, -1.0, -0.5, 0.25, 0.5};
  double worst = 0.0;
  for (std::size_t n = 0; n <= 30; ++n) {
    const auto f = u_factored(n);
    for (double t : ts) worst = std::max(worst, rel(eval_factored(f, R(t)), u_recursive(n, R(t))));
  }
  CHECK(worst < 1e-12);
  CHECK(rel(eval_factored(u_factored(30), R(-0.5)), u_recursive(30, R(-0.5))) < 1e-12);
  CHECK_THROWS_AS(eval_factored(u_factored(3), R(1.0)), DomainError);
  CHECK(eval_factored(u_factored(3), R(0.0)).is_zero());
}

TEST_CASE("mean, second moment and variance at orders 0..2") {
  const double mu[] = {1.0, 2.0, 8.0 / 3.0};
  const double m2[] = {2.0, 6.0, 88.0 / 9.0};
  const double var[] = {1.0, 2.0, 8.0 / 3.0};
  for (std::size_t n = 0; n <= 2; ++n) {
    CHECK(mean_tau(n).to_double() == doctest::Approx(mu[n]).epsilon(1e-15));
    CHECK(second_moment_tau(n).to_double() == doctest::Approx(m2[n]).epsilon(1e-15));
    CHECK(variance_tau(n).to_double() == doctest::Approx(var[n]).epsilon(1e-15));
  }
  CHECK(mean_tau_exact(2) == Rational(8, 3));
  CHECK(second_moment_tau_exact(2) == Rational(88, 9));
  CHECK(variance_tau_exact(1) == Rational(2));
}

TEST_CASE("precision policy") {
  CHECK(alternating_precision(100) >= 100 + kGuardBits);
  CHECK(alternating_precision(100, 500) == 500);
  CHECK_THROWS_AS(alternating_precision(100, 100), BudgetError);
  CHECK_THROWS_AS(mean_tau(100, 120), BudgetError);
  CHECK_THROWS_AS(alternating_precision(kMaxPrecisionBits), BudgetError);
}

TEST_CASE("mean equals the t -> 0 limit of u_n(t)/t") {
  for (std::size_t n = 0; n <= 20; ++n) {
    const auto f = u_factored(n);
    CHECK(rel(eval_factored_ratio(f, R(0.0)), mean_tau(n)) < 1e-10);
    // Derivative route: u_n(h)/h with tiny h.
    const BigReal h("1e-40", 400);
    CHECK(rel(eval_factored(f, h) / h, mean_tau(n)) < 1e-10);
  }
}

TEST_CASE("second moment equals u_n''(0) by central differences") {
  for (std::size_t n : {1u, 3u, 8u, 15u}) {
    const auto f = u_factored(n);
    const BigReal h("1e-25", 600);
    const BigReal two(2L, 600);
    const BigReal d2 = (eval_factored(f, h) + eval_factored(f, -h)) / (h * h);  // u_n(0) = 0
    CHECK(rel(d2, second_moment_tau(n)) < 1e-10);
    CHECK(rel(BigReal(second_moment_tau_exact(n), 256), second_moment_tau(n)) < 1e-30);
  }
}

TEST_CASE("exact rational mean matches the integral route") {
  CHECK(mean_tau_exact(3) == Rational(256, 81));
  for (std::size_t n = 1; n <= kExactMomentMaxOrder; ++n) {
    const BigReal via_integral = exp(A(n, AMethod::integral));
    CHECK(rel(via_integral, BigReal(mean_tau_exact(n), 128)) < 1e-30);
  }
  CHECK_THROWS_AS(mean_tau_exact(kExactMomentMaxOrder + 1), BudgetError);
}

TEST_CASE("A_n by both routes") {
  CHECK(A(1, AMethod::alternating_sum).to_double() == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(A(1, AMethod::integral).to_double() == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(A(2, AMethod::integral).to_double() == doctest::Approx(std::log(8.0 / 3.0)).epsilon(1e-15));
  CHECK(std::abs(A(2, AMethod::integral).to_double() - 0.980829) < 1e-6);

  const BigReal a = A(200, AMethod::alternating_sum);
  const BigReal b = A(200, AMethod::integral);
  CHECK(abs(a - b).to_double() < 1e-20);

  for (std::size_t n = 1; n <= 50; ++n) {
    CHECK(rel(exp(A(n, AMethod::integral)), mean_tau(n)) < 1e-10);
  }
}

TEST_CASE("integrand of the integral route") {
  const AIntegrand f(1000, 128);
  // Limit at 0 is H_n.
  CHECK(rel(f(BigReal(128)), BigReal(harmonic(1000), 128)) < 1e-35);
  // log prod (1 + x/k) at x = 1 is log(n + 1).
  CHECK(rel(f.log_product(BigReal(1L, 128)), log_of(1001, 128)) < 1e-35);
  // Direct product oracle at x = 0.3.
  const BigReal x(0.3, 192);
  BigReal direct(192);
  for (long k = 1; k <= 1000; ++k) direct += log1p(x / BigReal(k, 192));
  CHECK(rel(f.log_product(x.with_precision(128)), direct) < 1e-34);
}

TEST_CASE("A_n - log log n approaches gamma from above") {
  const double g3 = A_limit_gap(3).to_double();
  CHECK(std::isfinite(g3));
  CHECK(g3 > kGamma);
  CHECK_THROWS_AS(A_limit_gap(2), DomainError);
  const double a = A_limit_gap(1'000).to_double();
  const double b = A_limit_gap(10'000).to_double();
  const double c = A_limit_gap(100'000).to_double();
  CHECK(a > b);
  CHECK(b > c);
  CHECK(c > kGamma);
  // log(mu_n / log n) = A_n - log log n decreases over n in {1e2, 1e3, 1e4}.
  CHECK(A_limit_gap(100).to_double() > a);
}

TEST_CASE("a(n, m) identities") {
  for (std::size_t n = 1; n <= 20; ++n) {
    CHECK(a_alternating(n, 1) == harmonic(n, 1));
    CHECK(a_nested(n, 1) == harmonic(n, 1));
  }
  CHECK(a_alternating(3, 2) == a_nested(3, 2));
  // a(3,2) = sum_{i<=j<=3} 1/(ij) = 1 + 1/2 + 1/3 + 1/4 + 1/6 + 1/9.
  CHECK(a_nested(3, 2) == Rational(1) + Rational(1, 2) + Rational(1, 3) + Rational(1, 4) + Rational(1, 6) +
                              Rational(1, 9));
  for (std::size_t n = 1; n <= 25; ++n) {
    for (std::size_t m = 1; m <= 5; ++m) {
      const Rational exact = a_nested(n, m);
      CHECK(exact == a_alternating(n, m));
      CHECK(exact > 0);
      CHECK(rel(a_nested_numeric(n, m), BigReal(exact, 128)) < 1e-35);
    }
  }
  CHECK_THROWS_AS(a_alternating(kExactAMaxN + 1, 1), BudgetError);
  CHECK_THROWS_AS(a_nested(10, kExactAMaxM + 1), BudgetError);
}

TEST_CASE("a(n, m) <= (log n + 1)^m and the asymptotic ratio") {
  for (std::size_t n : {1u, 10u, 100u, 1000u}) {
    for (std::size_t m = 1; m <= 5; ++m) {
      const double a = a_nested_numeric(n, m).to_double();
      CHECK(a > 0.0);
      CHECK(a <= std::pow(std::log(static_cast<double>(n)) + 1.0, static_cast<double>(m)) * (1 + 1e-15));
    }
  }
  for (std::size_t m = 1; m <= 3; ++m) {
    const double L = std::log(1e6);
    const double ratio = a_nested_numeric(1'000'000, m).to_double() * std::tgamma(m + 1.0) / std::pow(L, m);
    CHECK(ratio >= 0.9);
    CHECK(ratio <= 1.5);
  }
  // Second-order asymptotic beats the leading term.
  const double a = a_nested_numeric(100'000, 2).to_double();
  const double L = std::log(1e5);
  CHECK(std::abs(a - a_asymptotic(100'000, 2).to_double()) < std::abs(a - L * L / 2));
}

TEST_CASE("harmonic numbers") {
  CHECK(harmonic(3) == Rational(11, 6));
  CHECK(std::abs(BigReal(harmonic(1000), 128).to_double() - harmonic_asymptotic(1000).to_double()) <= 1e-6);
  CHECK(std::abs(BigReal(harmonic(1000, 2), 128).to_double() - harmonic_asymptotic(1000, 2).to_double()) <= 1e-6);
  CHECK(harmonic_asymptotic(1000, 2).to_double() ==
        doctest::Approx(M_PI * M_PI / 6.0 - 1.0 / 1000.0).epsilon(1e-15));
  CHECK_THROWS_AS(harmonic(0), DomainError);
}
