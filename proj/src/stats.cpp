#include "ffire/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ffire/errors.hpp"

namespace ffire::stats {

namespace {
void require_nonempty(std::size_t n, const char* who) {
  if (n == 0) throw EmptyInputError(std::string(who) + ": empty sample");
}
}  // namespace

const std::vector<double>& SampleSummary::default_probs() {
  static const std::vector<double> probs{0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99};
  return probs;
}

SampleSummary::SampleSummary(std::vector<double> samples, const std::vector<double>& probs)
    : sorted_(std::move(samples)) {
  require_nonempty(sorted_.size(), "SampleSummary");
  std::stable_sort(sorted_.begin(), sorted_.end());

  const double n = static_cast<double>(sorted_.size());
  mean_ = std::accumulate(sorted_.begin(), sorted_.end(), 0.0) / n;
  if (sorted_.size() > 1) {
    double ss = 0.0;
    for (double x : sorted_) ss += (x - mean_) * (x - mean_);
    variance_ = ss / (n - 1.0);
  }
  quantiles_.reserve(probs.size());
  for (double p : probs) quantiles_.push_back({p, quantile(p)});
}

double SampleSummary::standard_error() const noexcept {
  return std::sqrt(variance_ / static_cast<double>(sorted_.size()));
}

double SampleSummary::quantile(double p) const {
  p = std::clamp(p, 0.0, 1.0);
  const double h = p * static_cast<double>(sorted_.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted_.size() - 1);
  return sorted_[lo] + (h - static_cast<double>(lo)) * (sorted_[hi] - sorted_[lo]);
}

double SampleSummary::ecdf(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double ks_statistic(std::span<const double> samples, const Cdf& cdf) {
  require_nonempty(samples.size(), "ks_statistic");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::stable_sort(sorted.begin(), sorted.end());
  return ks_statistic_sorted(sorted, cdf);
}

double ks_statistic_sorted(std::span<const double> sorted, const Cdf& cdf) {
  require_nonempty(sorted.size(), "ks_statistic");
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(i + 1) / n;
    d = std::max({d, above - f, f - below});
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  require_nonempty(a.size(), "ks_two_sample");
  require_nonempty(b.size(), "ks_two_sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double dkw_radius(std::size_t n, double alpha) {
  require_nonempty(n, "dkw_radius");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

std::vector<SurvivalPoint> empirical_survival(std::span<const double> samples,
                                              std::span<const double> x_grid) {
  require_nonempty(samples.size(), "empirical_survival");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());

  std::vector<SurvivalPoint> out;
  out.reserve(x_grid.size());
  for (double x : x_grid) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x);
    const double s = static_cast<double>(above) / n;
    const double se = std::sqrt(s * (1.0 - s) / n + 1.0 / (4.0 * n * n)) / (1.0 + 1.0 / n);
    out.push_back({x, s, se});
  }
  return out;
}

double lag1_autocorrelation(std::span<const double> xs) {
  if (xs.size() < 3) throw EmptyInputError("lag1_autocorrelation: need at least 3 values");
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = xs[i] - mean;
    den += d * d;
    if (i + 1 < xs.size()) num += d * (xs[i + 1] - mean);
  }
  return num / den;
}

}  // namespace ffire::stats
