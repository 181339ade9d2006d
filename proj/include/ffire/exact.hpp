#pragma once

// Exact and high-precision quantities for the inter-burnout law tau_n on Z+.
//
//   phi_n(t) = E exp(t tau_n),  u_n(t) = phi_n(t) - 1,
//   u_0(t) = t / (1 - t),  u_{n+1}(t) = -u_n(t) / u_n(t - 1),
//   u_n(t) = t * prod_{k=1}^{n+1} (k - t)^{(-1)^k C(n+1, k)}.
//
// The closed form and the moment formulas are alternating binomial sums that
// lose about n bits to cancellation, so every such sum runs with at least
// n + 64 bits of working precision.

#include <cstddef>
#include <optional>
#include <vector>

#include "ffire/bigreal.hpp"

namespace ffire::exact {

inline constexpr mpfr_prec_t kGuardBits = 64;
/// Added to the minimum when no precision is requested, so the default
/// result keeps about 64 bits beyond the cancelled leading digits.
inline constexpr mpfr_prec_t kDefaultExtraBits = 64;
inline constexpr mpfr_prec_t kMaxPrecisionBits = mpfr_prec_t{1} << 22;
/// Fixed precision of the integral and nested routes.
inline constexpr mpfr_prec_t kFixedBits = 128;

/// Working precision for an alternating sum of order n: `requested` if given,
/// otherwise n + kGuardBits + kDefaultExtraBits. Throws BudgetError when an explicit request is
/// below n + kGuardBits or the result exceeds kMaxPrecisionBits.
mpfr_prec_t alternating_precision(std::size_t n, std::optional<mpfr_prec_t> requested = {});

/// u_n(t) = t * prod_k (k - t)^{e_k} with exact exponents e_k = (-1)^k C(n+1, k).
class FactoredMGF {
 public:
  explicit FactoredMGF(std::size_t order);

  std::size_t order() const noexcept { return order_; }
  /// e_k for k in 1..order+1.
  const BigInt& exponent(std::size_t k) const;
  const std::vector<BigInt>& exponents() const noexcept { return exponents_; }

 private:
  std::size_t order_;
  std::vector<BigInt> exponents_;
};

/// C(n, k) as an exact integer.
BigInt binomial(std::size_t n, std::size_t k);

/// u_n(t) by n-fold application of u_{k+1}(t) = -u_k(t)/u_k(t-1).
/// Throws DomainError for t >= 1 or a zero denominator (names the level).
BigReal u_recursive(std::size_t n, const BigReal& t);

FactoredMGF u_factored(std::size_t n);

/// u_n(t) from the factored form, summed in log space.
/// Throws DomainError for t >= 1.
BigReal eval_factored(const FactoredMGF& f, const BigReal& t);

/// u_n(t) / t = prod_k (k - t)^{e_k}; finite at t = 0 where it equals mu_n.
BigReal eval_factored_ratio(const FactoredMGF& f, const BigReal& t);

/// phi_n(t) = 1 + u_n(t).
BigReal mgf(std::size_t n, const BigReal& t);

/// mu_n = E tau_n = exp(sum_{i=1}^{n+1} C(n+1,i) (-1)^i log i).
BigReal mean_tau(std::size_t n, std::optional<mpfr_prec_t> bits = {});

/// E tau_n^2 = 2 mu_n sum_{i=1}^{n+1} C(n+1,i) (-1)^{i+1} / i  (= 2 mu_n H_{n+1}).
BigReal second_moment_tau(std::size_t n, std::optional<mpfr_prec_t> bits = {});

BigReal variance_tau(std::size_t n, std::optional<mpfr_prec_t> bits = {});

/// Largest order accepted by the exact rational moment routines.
inline constexpr std::size_t kExactMomentMaxOrder = 16;

/// mu_n = prod_i i^{(-1)^i C(n+1, i)} as an exact rational.
Rational mean_tau_exact(std::size_t n);
Rational second_moment_tau_exact(std::size_t n);
Rational variance_tau_exact(std::size_t n);

enum class AMethod { alternating_sum, integral };

/// A_n = sum_{i=1}^{n+1} C(n+1,i) (-1)^i log i = log mu_n.
/// The integral route uses A_n = int_0^1 [1 - prod_{k<=n} (1 + x/k)^{-1}] / x dx
/// at kFixedBits.
BigReal A(std::size_t n, AMethod method, std::optional<mpfr_prec_t> bits = {});

/// A_n - log log n via the integral route. Throws DomainError for n < 3.
BigReal A_limit_gap(std::size_t n);

/// The integrand of the integral route, exposed for testing.
class AIntegrand {
 public:
  AIntegrand(std::size_t n, mpfr_prec_t bits);
  /// [1 - prod_{k<=n}(1 + x/k)^{-1}] / x, with the x -> 0 limit H_n.
  BigReal operator()(const BigReal& x) const;
  /// log prod_{k<=n} (1 + x/k).
  BigReal log_product(const BigReal& x) const;

 private:
  std::size_t n_;
  mpfr_prec_t bits_;
  std::size_t direct_terms_;
  // tail_[m-1] = sum_{k=direct_terms_+1}^{n} k^{-m}
  std::vector<BigReal> tail_;
  BigReal harmonic_;
};

/// Budgets of the exact a(n, m) routes.
inline constexpr std::size_t kExactAMaxN = 60;
inline constexpr std::size_t kExactAMaxM = 8;

/// a(n,m) = sum_{k=1}^n C(n,k) (-1)^{k+1} / k^m, exact.
Rational a_alternating(std::size_t n, std::size_t m);
/// a(n,m) = sum_{1<=i_1<=...<=i_m<=n} 1/(i_1...i_m) via the prefix recurrence
/// a(j,r) = a(j-1,r) + a(j,r-1)/j, a(j,0) = 1. Exact.
Rational a_nested(std::size_t n, std::size_t m);
/// Same recurrence at fixed precision, any n (cost O(n m)).
BigReal a_nested_numeric(std::size_t n, std::size_t m, mpfr_prec_t bits = kFixedBits);
/// log^m n / m! + gamma log^{m-1} n / (m-1)!.
BigReal a_asymptotic(std::size_t n, std::size_t m, mpfr_prec_t bits = kFixedBits);

/// H_{n,m} = sum_{k=1}^n k^{-m}, exact.
Rational harmonic(std::size_t n, std::size_t m = 1);
/// gamma + log n + 1/(2n) for m = 1; zeta(m) - 1/((m-1) n^{m-1}) for m >= 2.
BigReal harmonic_asymptotic(std::size_t n, std::size_t m = 1, mpfr_prec_t bits = kFixedBits);

}  // namespace ffire::exact
