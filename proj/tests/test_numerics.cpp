#include <doctest.h>

#include <cmath>
#include <vector>

#include "ffire/bigreal.hpp"
#include "ffire/errors.hpp"
#include "ffire/quadrature.hpp"

using namespace ffire;

namespace {

double rel(const BigReal& a, const BigReal& b) { return abs((a - b) / b).to_double(); }

}  // namespace

TEST_CASE("BigReal arithmetic and precision") {
  const BigReal third = BigReal(1L, 200) / BigReal(3L, 200);
  CHECK(third.precision() == 200);
  CHECK(third.to_double() == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
  CHECK((third * BigReal(3L, 200) - BigReal(1L, 200)).to_double() == doctest::Approx(0.0).epsilon(1e-59));
  CHECK((-third).sign() == -1);
  CHECK(BigReal(200).is_zero());
  CHECK(BigReal(2L, 64) > BigReal(1L, 64));

  const BigReal q(Rational(8, 3), 128);
  CHECK(q.to_double() == doctest::Approx(8.0 / 3.0));
  CHECK(to_string(Rational(8, 3)) == "8/3");
  CHECK(to_string(Rational(4, 2)) == "2");

  const BigReal big(BigInt("123456789012345678901234567890"), 128);
  CHECK(big.str(30) == "123456789012345678901234567890");
  CHECK(BigReal(1L, 128).str(5) == "1");
}

TEST_CASE("BigReal elementary functions against libm") {
  const BigReal x(0.37, 128);
  CHECK(log(x).to_double() == doctest::Approx(std::log(0.37)).epsilon(1e-15));
  CHECK(exp(x).to_double() == doctest::Approx(std::exp(0.37)).epsilon(1e-15));
  CHECK(log1p(x).to_double() == doctest::Approx(std::log1p(0.37)).epsilon(1e-15));
  CHECK(expm1(x).to_double() == doctest::Approx(std::expm1(0.37)).epsilon(1e-15));
  CHECK(pow(x, 5).to_double() == doctest::Approx(std::pow(0.37, 5)).epsilon(1e-15));
  CHECK(lngamma(BigReal(4.5, 128)).to_double() == doctest::Approx(std::lgamma(4.5)).epsilon(1e-14));
}

TEST_CASE("constants against reference digits") {
  const BigReal gamma_ref("0.57721566490153286060651209008240243104215933593992", 160);
  CHECK(rel(euler_gamma(160), gamma_ref) < 1e-45);
  const BigReal pi_ref("3.14159265358979323846264338327950288419716939937510", 160);
  CHECK(rel(zeta(2, 160), pi_ref * pi_ref / BigReal(6L, 160)) < 1e-45);
  const BigReal apery("1.20205690315959428539973816151144999076498629234049", 160);
  CHECK(rel(zeta(3, 160), apery) < 1e-45);
}

TEST_CASE("Gauss-Legendre rule integrates polynomials of degree 2N-1 exactly") {
  const auto rule = quad::gauss_legendre(10, 128);
  BigReal wsum(128);
  for (const auto& w : rule.weights) wsum += w;
  CHECK(rel(wsum, BigReal(2L, 128)) < 1e-35);
  // int_{-1}^1 x^18 = 2/19.
  BigReal s(128);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * pow(rule.nodes[i], 18);
  CHECK(rel(s, BigReal(Rational(2, 19), 128)) < 1e-35);

  const auto d = quad::gauss_legendre_double(4);
  double pd = 0.0;
  for (std::size_t i = 0; i < d.nodes.size(); ++i) pd += d.weights[i] * std::pow(d.nodes[i], 6);
  CHECK(pd == doctest::Approx(2.0 / 7.0).epsilon(1e-15));
}

TEST_CASE("adaptive quadrature at 128 bits") {
  const BigReal zero(128);
  const BigReal one(1L, 128);
  const auto r = quad::integrate([](const BigReal& x) { return exp(x); }, zero, one, 128);
  CHECK(rel(r.value, exp(one) - one) < 1e-33);
  CHECK(r.error_bound.to_double() < 1e-30);

  // sqrt has an endpoint singularity in its derivative; adaptivity handles it.
  const auto s = quad::integrate([](const BigReal& x) { return sqrt(x); }, zero, one, 128);
  CHECK(rel(s.value, BigReal(Rational(2, 3), 128)) < 1e-30);
}

TEST_CASE("adaptive quadrature reports non-convergence with its estimate") {
  quad::QuadOptions opts;
  opts.max_intervals = 4;
  const BigReal zero(128);
  const BigReal one(1L, 128);
  bool thrown = false;
  try {
    quad::integrate([](const BigReal& x) { return sqrt(x); }, zero, one, 128, opts);
  } catch (const ConvergenceError& e) {
    thrown = true;
    CHECK(e.estimate() == doctest::Approx(2.0 / 3.0).epsilon(1e-3));
    CHECK(e.error_bound() > 0.0);
  }
  CHECK(thrown);
}
