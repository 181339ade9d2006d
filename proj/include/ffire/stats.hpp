#pragma once

// Empirical-distribution utilities: summaries, Kolmogorov-Smirnov distances,
// survival curves.

#include <functional>
#include <span>
#include <vector>

namespace ffire::stats {

struct QuantilePoint {
  double prob;
  double value;
};

/// Sorted view of a sample plus its moments. Immutable once built.
class SampleSummary {
 public:
  static const std::vector<double>& default_probs();

  explicit SampleSummary(std::vector<double> samples,
                         const std::vector<double>& probs = default_probs());

  std::size_t count() const noexcept { return sorted_.size(); }
  double mean() const noexcept { return mean_; }
  /// Unbiased (n - 1) variance; 0 for a single sample.
  double variance() const noexcept { return variance_; }
  double standard_error() const noexcept;
  const std::vector<QuantilePoint>& quantiles() const noexcept { return quantiles_; }
  std::span<const double> sorted() const noexcept { return sorted_; }

  /// Linear-interpolated quantile (Hyndman-Fan type 7).
  double quantile(double p) const;
  /// Fraction of samples <= x.
  double ecdf(double x) const;

 private:
  std::vector<double> sorted_;
  double mean_ = 0.0;
  double variance_ = 0.0;
  std::vector<QuantilePoint> quantiles_;
};

using Cdf = std::function<double(double)>;

/// sup_x |F_n(x) - F(x)| for a continuous reference F.
double ks_statistic(std::span<const double> samples, const Cdf& cdf);
/// Same, for samples already sorted ascending.
double ks_statistic_sorted(std::span<const double> sorted, const Cdf& cdf);
/// Two-sample sup distance between empirical CDFs.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Dvoretzky-Kiefer-Wolfowitz radius: P(KS > eps) <= alpha at n samples.
double dkw_radius(std::size_t n, double alpha);

struct SurvivalPoint {
  double x;
  double survival;
  /// Wilson-score half-width at z = 1.
  double se;
};

/// Fraction of samples strictly greater than each grid point. Censored
/// observations may be passed as +infinity.
std::vector<SurvivalPoint> empirical_survival(std::span<const double> samples,
                                              std::span<const double> x_grid);

/// Lag-1 sample autocorrelation.
double lag1_autocorrelation(std::span<const double> xs);

}  // namespace ffire::stats
