#pragma once

#include <functional>
#include <vector>

#include "ffire/bigreal.hpp"

namespace ffire::quad {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<BigReal> nodes;
  std::vector<BigReal> weights;
};

/// N-point rule at `bits` precision (Newton iteration on P_N).
GaussRule gauss_legendre(std::size_t points, mpfr_prec_t bits);

struct QuadResult {
  BigReal value;
  BigReal error_bound;
  std::size_t evaluations;
};

struct QuadOptions {
  std::size_t points = 20;
  /// Absolute tolerance on the whole integral, as a power of two.
  long tolerance_exp2 = -118;
  std::size_t max_intervals = 4096;
};

/// Adaptive Gauss-Legendre on [a, b]: a panel is accepted when its N-point
/// value agrees with the sum over its two halves. Throws ConvergenceError
/// with the achieved estimate when max_intervals is exhausted.
QuadResult integrate(const std::function<BigReal(const BigReal&)>& f, const BigReal& a,
                     const BigReal& b, mpfr_prec_t bits, const QuadOptions& options = {});

/// Fixed-order Gauss-Legendre for double integrands, used by the table-based
/// special functions.
struct GaussRuleD {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRuleD gauss_legendre_double(std::size_t points);

}  // namespace ffire::quad
