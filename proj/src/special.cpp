#include "ffire/special.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "ffire/errors.hpp"
#include "ffire/quadrature.hpp"

namespace ffire::special {

namespace {

constexpr double kDefaultTableMax = 30.0;

const quad::GaussRuleD& gauss4() {
  static const quad::GaussRuleD rule = quad::gauss_legendre_double(4);
  return rule;
}

}  // namespace

DickmanTable DickmanTable::build(double x_max, std::size_t steps_per_unit) {
  if (!std::has_single_bit(steps_per_unit)) {
    throw std::invalid_argument("DickmanTable: steps_per_unit must be a power of two");
  }
  if (!(x_max >= 2.0)) throw std::invalid_argument("DickmanTable: x_max must be >= 2");

  DickmanTable t;
  t.steps_per_unit_ = steps_per_unit;
  t.h_ = 1.0 / static_cast<double>(steps_per_unit);
  const auto steps = static_cast<std::size_t>(std::ceil(x_max * static_cast<double>(steps_per_unit)));
  t.x_max_ = static_cast<double>(steps) * t.h_;
  t.values_.assign(steps + 1, 0.0);
  t.cubics_.resize(steps);
  t.cumulative_.assign(steps + 1, 0.0);

  const std::size_t unit = steps_per_unit;
  const double h = t.h_;
  auto& v = t.values_;

  // Slope at node j, as the limit from inside step `j` (right) or `j-1` (left).
  auto slope = [&](std::size_t j, bool right_side) {
    const double x = static_cast<double>(j) * h;
    if (j < unit || (j == unit && !right_side)) return 0.0;
    return -v[j - unit] / x;
  };
  auto make_cubic = [&](std::size_t j) {
    const double v0 = v[j];
    const double v1 = v[j + 1];
    const double m0 = slope(j, true) * h;
    const double m1 = slope(j + 1, false) * h;
    Cubic c{v0, m0, 3.0 * (v1 - v0) - 2.0 * m0 - m1, 2.0 * (v0 - v1) + m0 + m1};
    t.cubics_[j] = c;
    t.cumulative_[j + 1] = t.cumulative_[j] + h * (c.c0 + c.c1 / 2.0 + c.c2 / 3.0 + c.c3 / 4.0);
  };

  const auto& rule = gauss4();
  for (std::size_t j = 0; j <= steps; ++j) {
    const double x = static_cast<double>(j) * h;
    if (j <= unit) {
      v[j] = 1.0;
    } else if (j <= 2 * unit) {
      v[j] = 1.0 - std::log(x);
    } else {
      // Advance from node j-1; rho(t-1) for t in step j-1 lies in step j-1-unit.
      const std::size_t from = j - 1;
      const Cubic& lag = t.cubics_[from - unit];
      double acc = 0.0;
      for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
        const double s = 0.5 * (1.0 + rule.nodes[g]);
        const double tt = (static_cast<double>(from) + s) * h;
        const double lagged = lag.c0 + s * (lag.c1 + s * (lag.c2 + s * lag.c3));
        acc += rule.weights[g] * lagged / tt;
      }
      v[j] = v[from] - 0.5 * h * acc;
    }
    if (j > 0) make_cubic(j - 1);
  }
  return t;
}

std::size_t DickmanTable::step_index(double x) const {
  const auto j = static_cast<std::size_t>(x / h_);
  return std::min(j, cubics_.size() - 1);
}

double DickmanTable::rho(double x) const {
  if (!(x >= 0.0)) throw DomainError("dickman rho: x must be >= 0");
  if (x <= 1.0) return 1.0;
  if (x > x_max_) {
    throw DomainError("dickman rho: x = " + std::to_string(x) + " beyond table range " +
                      std::to_string(x_max_));
  }
  const std::size_t j = step_index(x);
  const double s = x / h_ - static_cast<double>(j);
  const Cubic& c = cubics_[j];
  return c.c0 + s * (c.c1 + s * (c.c2 + s * c.c3));
}

double DickmanTable::rho_derivative(double x) const {
  if (!(x >= 0.0)) throw DomainError("dickman rho': x must be >= 0");
  if (x < 1.0) return 0.0;
  if (x > x_max_) throw DomainError("dickman rho': x beyond table range");
  const std::size_t j = step_index(x);
  const double s = x / h_ - static_cast<double>(j);
  const Cubic& c = cubics_[j];
  return (c.c1 + s * (2.0 * c.c2 + s * 3.0 * c.c3)) / h_;
}

double DickmanTable::density(double x) const {
  if (!(x > 1.0)) return 0.0;
  return rho(x - 1.0) / x;
}

double DickmanTable::integral_rho(double x) const {
  if (!(x >= 0.0)) throw DomainError("dickman integral: x must be >= 0");
  if (x > x_max_) throw DomainError("dickman integral: x beyond table range");
  const std::size_t j = step_index(x);
  const double s = x / h_ - static_cast<double>(j);
  const Cubic& c = cubics_[j];
  return cumulative_[j] + h_ * s * (c.c0 + s * (c.c1 / 2.0 + s * (c.c2 / 3.0 + s * c.c3 / 4.0)));
}

const DickmanTable& default_dickman_table() {
  static const DickmanTable table = DickmanTable::build(kDefaultTableMax, 1024);
  return table;
}

namespace {
template <class Fn>
double with_table_covering(double x, Fn&& fn) {
  const auto& table = default_dickman_table();
  if (x <= table.x_max()) return fn(table);
  const DickmanTable wider = DickmanTable::build(std::ceil(x) + 1.0, 1024);
  return fn(wider);
}
}  // namespace

double dickman_rho(double x) {
  return with_table_covering(x, [x](const DickmanTable& t) { return t.rho(x); });
}

double dickman_density(double x) {
  if (!(x > 1.0)) return 0.0;
  return with_table_covering(x, [x](const DickmanTable& t) { return t.density(x); });
}

namespace {

// E1(z) for z > 0 by the Lentz continued fraction (A&S 5.1.22).
double e1_continued_fraction(double z) {
  constexpr double tiny = 1e-300;
  double b = z + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * static_cast<double>(i);
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) return h * std::exp(-z);
  }
  throw ConvergenceError("expint_E1: continued fraction did not converge", h * std::exp(-z), 0.0);
}

double ei_series(double s) {
  double sum = kEulerGamma + std::log(std::abs(s));
  double power = 1.0;  // s^m / m!
  for (int m = 1; m < 1000; ++m) {
    power *= s / m;
    const double term = power / m;
    sum += term;
    if (std::abs(term) < 1e-16 * std::max(std::abs(sum), 1e-300)) return sum;
  }
  throw ConvergenceError("expint_Ei: series did not converge", sum, 0.0);
}

}  // namespace

double expint_Ei(double s) {
  if (s == 0.0) throw DomainError("expint_Ei: pole at s = 0");
  if (s < -4.0) return -e1_continued_fraction(-s);
  return ei_series(s);
}

double expint_E1(double z) {
  if (!(z > 0.0)) throw DomainError("expint_E1: z must be > 0");
  return -expint_Ei(-z);
}

double limit_mgf(double s) {
  if (!(s < 1.0)) throw DomainError("limit_mgf: s must be < 1");
  if (s == 0.0) return 1.0;
  return 1.0 + std::copysign(std::exp(expint_Ei(s)), s);
}

double gd1_sample(Rng& rng, const GD1Spec& spec) {
  if (!(spec.epsilon > 0.0 && spec.epsilon < 1.0)) {
    throw DomainError("gd1_sample: epsilon must lie in (0, 1)");
  }
  double sum = 0.0;
  double product = 1.0;
  do {
    product *= rng.uniform_open0();
    sum += product;
  } while (product >= spec.epsilon);
  return sum;
}

std::vector<double> gd1_samples(std::size_t count, RngHandle rng, const GD1Spec& spec) {
  Rng gen(rng);
  std::vector<double> out(count);
  for (auto& x : out) x = gd1_sample(gen, spec);
  return out;
}

double gd1_cdf(const DickmanTable& table, double x) {
  if (!(x >= 0.0)) throw DomainError("gd1_cdf: x must be >= 0");
  return std::exp(-kEulerGamma) * table.integral_rho(x);
}

double gd1_cdf(double x) {
  if (!(x >= 0.0)) throw DomainError("gd1_cdf: x must be >= 0");
  return with_table_covering(x, [x](const DickmanTable& t) { return gd1_cdf(t, x); });
}

}  // namespace ffire::special
