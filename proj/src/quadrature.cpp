#include "ffire/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "ffire/errors.hpp"

namespace ffire::quad {

GaussRule gauss_legendre(std::size_t points, mpfr_prec_t bits) {
  const mpfr_prec_t work = bits + 32;
  GaussRule rule;
  rule.nodes.reserve(points);
  rule.weights.reserve(points);
  const BigReal one(1L, work);
  const BigReal tol = pow(BigReal(2L, work), -static_cast<long>(work) + 8);

  for (std::size_t i = 1; i <= points; ++i) {
    BigReal x(std::cos(std::numbers::pi * (static_cast<double>(i) - 0.25) /
                       (static_cast<double>(points) + 0.5)),
              work);
    BigReal derivative(work);
    for (int iter = 0; iter < 200; ++iter) {
      // Three-term recurrence for P_N(x) and P_{N-1}(x).
      BigReal p0 = one;
      BigReal p1 = x;
      for (std::size_t k = 2; k <= points; ++k) {
        BigReal p2 = (BigReal(static_cast<long>(2 * k - 1), work) * x * p1 -
                      BigReal(static_cast<long>(k - 1), work) * p0);
        p2 /= static_cast<long>(k);
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      derivative = BigReal(static_cast<long>(points), work) * (x * p1 - p0) / (x * x - one);
      const BigReal step = p1 / derivative;
      x -= step;
      if (abs(step) < tol) break;
    }
    rule.nodes.push_back(x.with_precision(bits));
    rule.weights.push_back(
        (BigReal(2L, work) / ((one - x * x) * derivative * derivative)).with_precision(bits));
  }
  return rule;
}

namespace {

BigReal apply_rule(const GaussRule& rule, const std::function<BigReal(const BigReal&)>& f,
                   const BigReal& a, const BigReal& b, mpfr_prec_t bits, std::size_t& evals) {
  const BigReal half_width = (b - a) / BigReal(2L, bits);
  const BigReal mid = (a + b) / BigReal(2L, bits);
  BigReal sum(bits);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half_width * rule.nodes[i]);
  }
  evals += rule.nodes.size();
  return sum * half_width;
}

struct Panel {
  BigReal a;
  BigReal b;
  BigReal value;
};

}  // namespace

QuadResult integrate(const std::function<BigReal(const BigReal&)>& f, const BigReal& a,
                     const BigReal& b, mpfr_prec_t bits, const QuadOptions& options) {
  const GaussRule rule = gauss_legendre(options.points, bits);
  const BigReal total_width = b - a;
  const BigReal tol = pow(BigReal(2L, bits), options.tolerance_exp2);

  std::size_t evals = 0;
  BigReal value(bits);
  BigReal error(bits);
  std::vector<Panel> stack;
  stack.push_back({a, b, apply_rule(rule, f, a, b, bits, evals)});
  std::size_t intervals = 1;

  while (!stack.empty()) {
    Panel p = std::move(stack.back());
    stack.pop_back();
    const BigReal mid = (p.a + p.b) / BigReal(2L, bits);
    BigReal left = apply_rule(rule, f, p.a, mid, bits, evals);
    BigReal right = apply_rule(rule, f, mid, p.b, bits, evals);
    const BigReal refined = left + right;
    const BigReal diff = abs(refined - p.value);
    const BigReal local_tol = tol * (p.b - p.a) / total_width;
    if (diff <= local_tol || intervals >= options.max_intervals) {
      if (diff > local_tol) {
        // Out of budget: report what was reached.
        value += refined;
        error += diff;
        for (const auto& rest : stack) value += rest.value;
        throw ConvergenceError("integrate: interval budget exhausted", value.to_double(),
                               error.to_double());
      }
      value += refined;
      error += diff;
      continue;
    }
    ++intervals;
    stack.push_back({mid, p.b, std::move(right)});
    stack.push_back({std::move(p.a), mid, std::move(left)});
  }
  return {std::move(value), std::move(error), evals};
}

GaussRuleD gauss_legendre_double(std::size_t points) {
  const GaussRule r = gauss_legendre(points, 64);
  GaussRuleD out;
  for (std::size_t i = 0; i < points; ++i) {
    out.nodes.push_back(r.nodes[i].to_double());
    out.weights.push_back(r.weights[i].to_double());
  }
  return out;
}

}  // namespace ffire::quad
