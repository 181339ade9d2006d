#pragma once

// Special functions of the limit law of tau_n / log n:
//   rho      Dickman function, rho = 1 on [0,1], x rho'(x) = -rho(x-1);
//            survival function of the limit xi.
//   f        density of xi, f(x) = rho(x-1)/x for x > 1.
//   Ei, E1   exponential integrals (real argument, principal value).
//   GD(1)    law of U1 + U1 U2 + U1 U2 U3 + ..., CDF e^{-gamma} int_0^x rho.

#include <cstddef>
#include <vector>

#include "ffire/rng.hpp"

namespace ffire::special {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// Piecewise-cubic Hermite representation of rho on a uniform grid.
///
/// Values on [0, 2] come from the closed forms; beyond 2 each step advances
/// rho(x + h) = rho(x) - int_x^{x+h} rho(t-1)/t dt with 4-point Gauss-Legendre,
/// reading rho(t-1) from the already-built part of the table. Node slopes are
/// -rho(x-1)/x, one-sided at x = 1 where rho' jumps from 0 to -1.
class DickmanTable {
 public:
  /// steps_per_unit must be a power of two so nodes land on the integers.
  static DickmanTable build(double x_max = 30.0, std::size_t steps_per_unit = 1024);

  double step() const noexcept { return h_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t node_count() const noexcept { return values_.size(); }
  double node(std::size_t j) const noexcept { return static_cast<double>(j) * h_; }
  double node_value(std::size_t j) const noexcept { return values_[j]; }

  /// Throws DomainError for x < 0 or x > x_max.
  double rho(double x) const;
  /// Derivative of the interpolant.
  double rho_derivative(double x) const;
  /// f(x) = rho(x-1)/x for x > 1, 0 otherwise.
  double density(double x) const;
  /// int_0^x rho(u) du, exact on the interpolant.
  double integral_rho(double x) const;

 private:
  struct Cubic {
    // rho(x_j + s h) = c0 + s (c1 + s (c2 + s c3)), s in [0, 1]
    double c0, c1, c2, c3;
  };

  DickmanTable() = default;
  std::size_t step_index(double x) const;

  double h_ = 0.0;
  std::size_t steps_per_unit_ = 0;
  double x_max_ = 0.0;
  std::vector<double> values_;
  std::vector<Cubic> cubics_;
  std::vector<double> cumulative_;  // int_0^{x_j} rho
};

/// Shared default table on [0, 30], built on first use.
const DickmanTable& default_dickman_table();

/// rho(x); tables are extended (rebuilt locally) for x beyond the default range.
double dickman_rho(double x);
double dickman_density(double x);

/// Ei(s) = gamma + log|s| + sum_{m>=1} s^m / (m m!), s != 0.
/// For s < -4 the value comes from -E1(-s) by continued fraction.
double expint_Ei(double s);
/// E1(z) = int_z^inf e^{-t}/t dt, z > 0.
double expint_E1(double z);

/// MGF of the limit law, phi(s) = 1 + s e^gamma exp(sum s^m/(m m!)), i.e.
/// 1 + exp(Ei(s)) with the principal branch of log s (a sign flip for s < 0).
/// phi(0) = 1. Throws DomainError for s >= 1.
double limit_mgf(double s);

struct GD1Spec {
  /// Stop the product series once the running product drops below this.
  double epsilon = 1e-9;
};

double gd1_sample(Rng& rng, const GD1Spec& spec = {});
std::vector<double> gd1_samples(std::size_t count, RngHandle rng, const GD1Spec& spec = {});

/// e^{-gamma} int_0^x rho. Throws DomainError for x < 0.
double gd1_cdf(double x);
double gd1_cdf(const DickmanTable& table, double x);

}  // namespace ffire::special
