#include "ffire/exact.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ffire/errors.hpp"
#include "ffire/quadrature.hpp"

namespace ffire::exact {

namespace {

std::vector<BigInt> binomial_row(std::size_t n) {
  std::vector<BigInt> row(n + 1);
  row[0] = 1;
  for (std::size_t k = 0; k < n; ++k) {
    row[k + 1] = row[k] * (n - k) / (k + 1);
  }
  return row;
}

void require_below_one(const BigReal& t, const char* who) {
  if (t >= BigReal(1L, t.precision())) {
    throw DomainError(std::string(who) + ": t must be < 1, got " + t.str(12));
  }
}

// Exponent-based magnitude test: |small| < |ref| * 2^-bits (up to a factor 2).
bool negligible(mpfr_srcptr small, mpfr_srcptr ref, mpfr_prec_t bits) {
  if (mpfr_zero_p(small)) return true;
  if (mpfr_zero_p(ref)) return false;
  return mpfr_get_exp(small) < mpfr_get_exp(ref) - bits;
}

void check_exact_a_budget(std::size_t n, std::size_t m, const char* who) {
  if (n == 0 || m == 0) throw DomainError(std::string(who) + ": need n >= 1 and m >= 1");
  if (n > kExactAMaxN || m > kExactAMaxM) {
    throw BudgetError(std::string(who) + ": exact route limited to n <= " + std::to_string(kExactAMaxN) +
                      ", m <= " + std::to_string(kExactAMaxM));
  }
}

}  // namespace

mpfr_prec_t alternating_precision(std::size_t n, std::optional<mpfr_prec_t> requested) {
  const auto needed = static_cast<mpfr_prec_t>(n) + kGuardBits;
  if (needed > kMaxPrecisionBits) {
    throw BudgetError("order " + std::to_string(n) + " needs " + std::to_string(needed) +
                      " bits, above the limit of " + std::to_string(kMaxPrecisionBits));
  }
  if (!requested) return needed + kDefaultExtraBits;
  if (*requested < needed) {
    throw BudgetError("order " + std::to_string(n) + " needs at least " + std::to_string(needed) +
                      " bits of working precision; " + std::to_string(*requested) + " requested");
  }
  if (*requested > kMaxPrecisionBits) {
    throw BudgetError("requested precision above the limit of " + std::to_string(kMaxPrecisionBits));
  }
  return *requested;
}

BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return BigInt(0);
  k = std::min(k, n - k);
  BigInt c = 1;
  for (std::size_t i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

FactoredMGF::FactoredMGF(std::size_t order) : order_(order) {
  auto row = binomial_row(order + 1);
  exponents_.reserve(order + 1);
  for (std::size_t k = 1; k <= order + 1; ++k) {
    exponents_.push_back(k % 2 == 0 ? row[k] : BigInt(-row[k]));
  }
}

const BigInt& FactoredMGF::exponent(std::size_t k) const {
  if (k == 0 || k > exponents_.size()) {
    throw std::out_of_range("FactoredMGF::exponent: k out of range");
  }
  return exponents_[k - 1];
}

BigReal u_recursive(std::size_t n, const BigReal& t) {
  require_below_one(t, "u_recursive");
  const mpfr_prec_t bits = std::max(t.precision(), alternating_precision(n));
  const BigReal one(1L, bits);

  // level[j] = u_k(t - j) for the current level k.
  std::vector<BigReal> level;
  level.reserve(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const BigReal s = t.with_precision(bits) - BigReal(static_cast<long>(j), bits);
    level.push_back(s / (one - s));
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j + 1 < level.size(); ++j) {
      if (level[j + 1].is_zero()) {
        throw DomainError("u_recursive: pole at level " + std::to_string(k + 1) + " (u_" +
                          std::to_string(k) + " vanishes at t - " + std::to_string(j + 1) + ")");
      }
      level[j] = -(level[j] / level[j + 1]);
    }
    level.pop_back();
  }
  return level.front();
}

FactoredMGF u_factored(std::size_t n) { return FactoredMGF(n); }

BigReal eval_factored_ratio(const FactoredMGF& f, const BigReal& t) {
  require_below_one(t, "eval_factored");
  const mpfr_prec_t bits = std::max(t.precision(), alternating_precision(f.order()));
  const BigReal tt = t.with_precision(bits);
  BigReal log_sum(bits);
  for (std::size_t k = 1; k <= f.order() + 1; ++k) {
    const BigReal factor = BigReal(static_cast<long>(k), bits) - tt;
    log_sum += log(factor) * f.exponent(k);
  }
  return exp(log_sum);
}

BigReal eval_factored(const FactoredMGF& f, const BigReal& t) {
  BigReal ratio = eval_factored_ratio(f, t);
  if (t.is_zero()) return BigReal(ratio.precision());
  return ratio * t.with_precision(ratio.precision());
}

BigReal mgf(std::size_t n, const BigReal& t) {
  BigReal u = eval_factored(u_factored(n), t);
  return u + BigReal(1L, u.precision());
}

BigReal mean_tau(std::size_t n, std::optional<mpfr_prec_t> bits) {
  return exp(A(n, AMethod::alternating_sum, bits));
}

BigReal second_moment_tau(std::size_t n, std::optional<mpfr_prec_t> bits) {
  const mpfr_prec_t prec = alternating_precision(n, bits);
  const auto row = binomial_row(n + 1);
  BigReal sum(prec);
  for (std::size_t i = 1; i <= n + 1; ++i) {
    BigReal term(row[i], prec);
    term /= static_cast<long>(i);
    if (i % 2 == 1) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return BigReal(2L, prec) * mean_tau(n, prec) * sum;
}

BigReal variance_tau(std::size_t n, std::optional<mpfr_prec_t> bits) {
  const mpfr_prec_t prec = alternating_precision(n, bits);
  const BigReal mu = mean_tau(n, prec);
  return second_moment_tau(n, prec) - mu * mu;
}

Rational mean_tau_exact(std::size_t n) {
  if (n > kExactMomentMaxOrder) {
    throw BudgetError("mean_tau_exact: order above " + std::to_string(kExactMomentMaxOrder));
  }
  const auto row = binomial_row(n + 1);
  BigInt num = 1;
  BigInt den = 1;
  for (std::size_t i = 2; i <= n + 1; ++i) {
    const BigInt power = boost::multiprecision::pow(BigInt(i), row[i].convert_to<unsigned>());
    if (i % 2 == 0) {
      num *= power;
    } else {
      den *= power;
    }
  }
  return Rational(num, den);
}

Rational second_moment_tau_exact(std::size_t n) {
  return Rational(2) * mean_tau_exact(n) * harmonic(n + 1, 1);
}

Rational variance_tau_exact(std::size_t n) {
  const Rational mu = mean_tau_exact(n);
  return second_moment_tau_exact(n) - mu * mu;
}

AIntegrand::AIntegrand(std::size_t n, mpfr_prec_t bits)
    : n_(n), bits_(bits), direct_terms_(std::min<std::size_t>(n, 256)), harmonic_(bits) {
  for (std::size_t k = 1; k <= direct_terms_; ++k) {
    harmonic_ += BigReal(1L, bits) / BigReal(static_cast<long>(k), bits);
  }
  if (n_ <= direct_terms_) return;

  // Power sums over the tail k > direct_terms_, where x/k <= 1/256 and the
  // series for log(1 + x/k) converges geometrically.
  const auto terms = static_cast<std::size_t>(std::ceil(static_cast<double>(bits + 16) / 8.0)) + 2;
  tail_.assign(terms, BigReal(bits));
  BigReal r(bits);
  BigReal p(bits);
  for (std::size_t k = direct_terms_ + 1; k <= n_; ++k) {
    mpfr_set_ui(r.get(), k, MPFR_RNDN);
    mpfr_ui_div(r.get(), 1, r.get(), MPFR_RNDN);
    mpfr_set(p.get(), r.get(), MPFR_RNDN);
    for (std::size_t m = 0; m < terms; ++m) {
      mpfr_add(tail_[m].get(), tail_[m].get(), p.get(), MPFR_RNDN);
      if (negligible(p.get(), tail_[m].get(), bits + 16)) break;
      mpfr_mul(p.get(), p.get(), r.get(), MPFR_RNDN);
    }
  }
  harmonic_ += tail_[0];
}

BigReal AIntegrand::log_product(const BigReal& x) const {
  BigReal sum(bits_);
  const BigReal xx = x.with_precision(bits_);
  for (std::size_t k = 1; k <= direct_terms_; ++k) {
    BigReal q = xx;
    q /= static_cast<long>(k);
    sum += log1p(q);
  }
  BigReal power = xx;
  for (std::size_t m = 1; m <= tail_.size(); ++m) {
    BigReal term = power * tail_[m - 1];
    term /= static_cast<long>(m);
    if (m % 2 == 1) {
      sum += term;
    } else {
      sum -= term;
    }
    power *= xx;
  }
  return sum;
}

BigReal AIntegrand::operator()(const BigReal& x) const {
  if (x.is_zero()) return harmonic_;
  // 1 - e^{-L} = -expm1(-L): no cancellation as x -> 0.
  return -expm1(-log_product(x)) / x.with_precision(bits_);
}

BigReal A(std::size_t n, AMethod method, std::optional<mpfr_prec_t> bits) {
  if (method == AMethod::alternating_sum) {
    const mpfr_prec_t prec = alternating_precision(n, bits);
    const auto row = binomial_row(n + 1);
    BigReal sum(prec);
    for (std::size_t i = 2; i <= n + 1; ++i) {
      BigReal term = log_of(static_cast<long>(i), prec) * row[i];
      if (i % 2 == 0) {
        sum += term;
      } else {
        sum -= term;
      }
    }
    return sum;
  }

  const mpfr_prec_t prec = bits.value_or(kFixedBits);
  if (n == 0) return BigReal(prec);
  const AIntegrand integrand(n, prec);
  const BigReal zero(prec);
  const BigReal one(1L, prec);
  quad::QuadOptions options;
  options.tolerance_exp2 = -static_cast<long>(prec) + 10;
  auto result = quad::integrate([&](const BigReal& x) { return integrand(x); }, zero, one, prec, options);
  return std::move(result.value);
}

BigReal A_limit_gap(std::size_t n) {
  if (n < 3) throw DomainError("A_limit_gap: n must be >= 3");
  BigReal a = A(n, AMethod::integral);
  return a - log(log(BigReal(static_cast<long>(n), a.precision())));
}

Rational a_alternating(std::size_t n, std::size_t m) {
  check_exact_a_budget(n, m, "a_alternating");
  const auto row = binomial_row(n);
  Rational sum = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    const BigInt km = boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(m));
    const Rational term(row[k], km);
    if (k % 2 == 1) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return sum;
}

Rational a_nested(std::size_t n, std::size_t m) {
  check_exact_a_budget(n, m, "a_nested");
  std::vector<Rational> cur(m + 1, Rational(0));
  cur[0] = 1;
  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t r = 1; r <= m; ++r) cur[r] += cur[r - 1] / Rational(j);
  }
  return cur[m];
}

BigReal a_nested_numeric(std::size_t n, std::size_t m, mpfr_prec_t bits) {
  if (n == 0 || m == 0) throw DomainError("a_nested_numeric: need n >= 1 and m >= 1");
  if (static_cast<double>(n) * static_cast<double>(m) > 1e9) {
    throw BudgetError("a_nested_numeric: n * m above 1e9");
  }
  std::vector<BigReal> cur(m + 1, BigReal(bits));
  cur[0] = BigReal(1L, bits);
  BigReal q(bits);
  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t r = 1; r <= m; ++r) {
      mpfr_div_ui(q.get(), cur[r - 1].get(), j, MPFR_RNDN);
      mpfr_add(cur[r].get(), cur[r].get(), q.get(), MPFR_RNDN);
    }
  }
  return cur[m];
}

BigReal a_asymptotic(std::size_t n, std::size_t m, mpfr_prec_t bits) {
  if (n == 0 || m == 0) throw DomainError("a_asymptotic: need n >= 1 and m >= 1");
  const BigReal L = log_of(static_cast<long>(n), bits);
  BigReal lead = pow(L, static_cast<long>(m));
  BigReal next = euler_gamma(bits) * pow(L, static_cast<long>(m - 1));
  for (std::size_t i = 2; i <= m; ++i) lead /= static_cast<long>(i);
  for (std::size_t i = 2; i + 1 <= m; ++i) next /= static_cast<long>(i);
  return lead + next;
}

Rational harmonic(std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw DomainError("harmonic: need n >= 1 and m >= 1");
  Rational sum = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    sum += Rational(BigInt(1), boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(m)));
  }
  return sum;
}

BigReal harmonic_asymptotic(std::size_t n, std::size_t m, mpfr_prec_t bits) {
  if (n == 0 || m == 0) throw DomainError("harmonic_asymptotic: need n >= 1 and m >= 1");
  const BigReal nn(static_cast<long>(n), bits);
  if (m == 1) {
    return euler_gamma(bits) + log(nn) + BigReal(1L, bits) / (BigReal(2L, bits) * nn);
  }
  BigReal correction = pow(nn, static_cast<long>(m - 1));
  correction *= BigReal(static_cast<long>(m - 1), bits);
  return zeta(m, bits) - BigReal(1L, bits) / correction;
}

}  // namespace ffire::exact
