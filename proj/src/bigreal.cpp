#include "ffire/bigreal.hpp"

#include <algorithm>
#include <vector>

namespace ffire {

namespace {
constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

// Raise precision in place (keeping the value) when an operation needs more.
void widen(mpfr_ptr x, mpfr_prec_t bits) {
  if (mpfr_get_prec(x) < bits) mpfr_prec_round(x, bits, kRnd);
}
}  // namespace

BigReal::BigReal(mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

BigReal::BigReal(double value, mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_d(value_, value, kRnd);
}

BigReal::BigReal(long value, mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_si(value_, value, kRnd);
}

BigReal::BigReal(const BigInt& value, mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_z(value_, value.backend().data(), kRnd);
}

BigReal::BigReal(const Rational& value, mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_q(value_, value.backend().data(), kRnd);
}

BigReal::BigReal(const std::string& decimal, mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_str(value_, decimal.c_str(), 10, kRnd);
}

BigReal::BigReal(const BigReal& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, kRnd);
}

BigReal::BigReal(BigReal&& other) noexcept {
  // Leave `other` as a valid minimal-precision zero.
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, kRnd);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigReal::~BigReal() { mpfr_clear(value_); }

mpfr_prec_t BigReal::precision() const noexcept { return mpfr_get_prec(value_); }

BigReal BigReal::with_precision(mpfr_prec_t bits) const {
  BigReal out(bits);
  mpfr_set(out.value_, value_, kRnd);
  return out;
}

double BigReal::to_double() const noexcept { return mpfr_get_d(value_, kRnd); }

long double BigReal::to_long_double() const noexcept { return mpfr_get_ld(value_, kRnd); }

std::string BigReal::str(int digits) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return sign() > 0 ? "inf" : "-inf";
  std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, value_);
  return std::string(buf.data());
}

int BigReal::sign() const noexcept { return mpfr_sgn(value_); }
bool BigReal::is_zero() const noexcept { return mpfr_zero_p(value_) != 0; }
bool BigReal::is_finite() const noexcept { return mpfr_number_p(value_) != 0; }

BigReal& BigReal::operator+=(const BigReal& rhs) {
  widen(value_, rhs.precision());
  mpfr_add(value_, value_, rhs.value_, kRnd);
  return *this;
}

BigReal& BigReal::operator-=(const BigReal& rhs) {
  widen(value_, rhs.precision());
  mpfr_sub(value_, value_, rhs.value_, kRnd);
  return *this;
}

BigReal& BigReal::operator*=(const BigReal& rhs) {
  widen(value_, rhs.precision());
  mpfr_mul(value_, value_, rhs.value_, kRnd);
  return *this;
}

BigReal& BigReal::operator/=(const BigReal& rhs) {
  widen(value_, rhs.precision());
  mpfr_div(value_, value_, rhs.value_, kRnd);
  return *this;
}

BigReal& BigReal::operator*=(const BigInt& rhs) {
  mpfr_mul_z(value_, value_, rhs.backend().data(), kRnd);
  return *this;
}

BigReal& BigReal::operator/=(long rhs) {
  mpfr_div_si(value_, value_, rhs, kRnd);
  return *this;
}

BigReal BigReal::operator-() const {
  BigReal out(*this);
  mpfr_neg(out.value_, out.value_, kRnd);
  return out;
}

bool operator==(const BigReal& a, const BigReal& b) noexcept {
  return mpfr_equal_p(a.value_, b.value_) != 0;
}

std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) noexcept {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

BigReal abs(const BigReal& x) {
  BigReal out(x.precision());
  mpfr_abs(out.get(), x.get(), kRnd);
  return out;
}

BigReal sqrt(const BigReal& x) {
  BigReal out(x.precision());
  mpfr_sqrt(out.get(), x.get(), kRnd);
  return out;
}

BigReal log(const BigReal& x) {
  BigReal out(x.precision());
  mpfr_log(out.get(), x.get(), kRnd);
  return out;
}

BigReal log1p(const BigReal& x) {
  BigReal out(x.precision());
  mpfr_log1p(out.get(), x.get(), kRnd);
  return out;
}

BigReal exp(const BigReal& x) {
  BigReal out(x.precision());
  mpfr_exp(out.get(), x.get(), kRnd);
  return out;
}

BigReal expm1(const BigReal& x) {
  BigReal out(x.precision());
  mpfr_expm1(out.get(), x.get(), kRnd);
  return out;
}

BigReal pow(const BigReal& x, long n) {
  BigReal out(x.precision());
  mpfr_pow_si(out.get(), x.get(), n, kRnd);
  return out;
}

BigReal log_of(long k, mpfr_prec_t bits) {
  BigReal out(bits);
  mpfr_log_ui(out.get(), static_cast<unsigned long>(k), kRnd);
  return out;
}

BigReal euler_gamma(mpfr_prec_t bits) {
  BigReal out(bits);
  mpfr_const_euler(out.get(), kRnd);
  return out;
}

BigReal zeta(unsigned long m, mpfr_prec_t bits) {
  BigReal out(bits);
  mpfr_zeta_ui(out.get(), m, kRnd);
  return out;
}

BigReal lngamma(const BigReal& x) {
  BigReal out(x.precision());
  mpfr_lngamma(out.get(), x.get(), kRnd);
  return out;
}

std::string to_string(const Rational& q) {
  const auto num = boost::multiprecision::numerator(q);
  const auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace ffire
