#pragma once

// Thin RAII value type over an MPFR float with an explicit working precision.
// Binary operations produce a result at the larger operand precision; every
// operation rounds to nearest.

#include <mpfr.h>

#include <boost/multiprecision/gmp.hpp>

#include <compare>
#include <string>

namespace ffire {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Working precision in bits.
struct Precision {
  mpfr_prec_t bits = 128;
};

inline constexpr mpfr_prec_t kDefaultPrecisionBits = 128;

class BigReal {
 public:
  explicit BigReal(mpfr_prec_t bits = kDefaultPrecisionBits);
  BigReal(double value, mpfr_prec_t bits);
  BigReal(long value, mpfr_prec_t bits);
  BigReal(const BigInt& value, mpfr_prec_t bits);
  BigReal(const Rational& value, mpfr_prec_t bits);
  /// Decimal string, e.g. "0.57721566490153286060651209".
  BigReal(const std::string& decimal, mpfr_prec_t bits);

  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  mpfr_prec_t precision() const noexcept;
  /// Copy rounded to a new precision.
  BigReal with_precision(mpfr_prec_t bits) const;

  double to_double() const noexcept;
  long double to_long_double() const noexcept;
  /// Scientific notation with `digits` significant decimal digits.
  std::string str(int digits = 20) const;

  int sign() const noexcept;
  bool is_zero() const noexcept;
  bool is_finite() const noexcept;

  BigReal& operator+=(const BigReal& rhs);
  BigReal& operator-=(const BigReal& rhs);
  BigReal& operator*=(const BigReal& rhs);
  BigReal& operator/=(const BigReal& rhs);
  BigReal& operator*=(const BigInt& rhs);
  BigReal& operator/=(long rhs);

  friend BigReal operator+(BigReal lhs, const BigReal& rhs) { return lhs += rhs; }
  friend BigReal operator-(BigReal lhs, const BigReal& rhs) { return lhs -= rhs; }
  friend BigReal operator*(BigReal lhs, const BigReal& rhs) { return lhs *= rhs; }
  friend BigReal operator/(BigReal lhs, const BigReal& rhs) { return lhs /= rhs; }
  friend BigReal operator*(BigReal lhs, const BigInt& rhs) { return lhs *= rhs; }
  BigReal operator-() const;

  friend bool operator==(const BigReal& a, const BigReal& b) noexcept;
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) noexcept;

  mpfr_srcptr get() const noexcept { return value_; }
  mpfr_ptr get() noexcept { return value_; }

 private:
  mpfr_t value_;
};

BigReal abs(const BigReal& x);
BigReal sqrt(const BigReal& x);
BigReal log(const BigReal& x);
BigReal log1p(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal expm1(const BigReal& x);
BigReal pow(const BigReal& x, long n);

/// log(k) for a positive integer k.
BigReal log_of(long k, mpfr_prec_t bits);
/// Euler-Mascheroni constant.
BigReal euler_gamma(mpfr_prec_t bits);
/// Riemann zeta at an integer m >= 2.
BigReal zeta(unsigned long m, mpfr_prec_t bits);
BigReal lngamma(const BigReal& x);

/// "p/q" (or "p" when q == 1).
std::string to_string(const Rational& q);

}  // namespace ffire
