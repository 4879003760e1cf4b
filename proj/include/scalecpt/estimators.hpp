#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace scalecpt {

enum class ScaleKind { variance, sd, mean_dev, gini, mad, qn_alpha, qn_original };

struct EstimatorKind {
  ScaleKind kind = ScaleKind::gini;
  double alpha = 0.8;  // only meaningful for qn_alpha

  static EstimatorKind variance() { return {ScaleKind::variance, 0.0}; }
  static EstimatorKind sd() { return {ScaleKind::sd, 0.0}; }
  static EstimatorKind mean_dev() { return {ScaleKind::mean_dev, 0.0}; }
  static EstimatorKind gini() { return {ScaleKind::gini, 0.0}; }
  static EstimatorKind mad() { return {ScaleKind::mad, 0.0}; }
  static EstimatorKind qn(double alpha) { return {ScaleKind::qn_alpha, alpha}; }
  static EstimatorKind qn_original() { return {ScaleKind::qn_original, 0.0}; }

  std::string name() const;
  void validate() const;
};

/// Parse "var", "sd", "md", "gmd", "mad", "qn" (alpha 0.8), "qn(0.75)", "qn-orig".
EstimatorKind parse_estimator(const std::string& text);

/// Sample median; midpoint of the two central order statistics for even n.
double sample_median(std::span<const double> x);

/// Sample variance with divisor n-1.
double sample_variance(std::span<const double> x);

/// Mean absolute deviation from the sample median, divisor n-1.
double mean_deviation(std::span<const double> x);

/// Average absolute difference over all pairs, computed in O(n log n)
/// from the order statistics.
double gini_mean_difference(std::span<const double> x);

/// Median of absolute deviations from the sample median (no consistency
/// constant).
double mad(std::span<const double> x);

/// The ceil(alpha * C(n,2))-th smallest of all pairwise absolute differences.
double qn_alpha(std::span<const double> x, double alpha);

/// The C(floor(n/2)+1, 2)-th smallest pairwise absolute difference.
double qn_original(std::span<const double> x);

double scale_estimate(std::span<const double> x, const EstimatorKind& kind);

long long pair_count(std::size_t n);
long long qn_rank(std::size_t n, double alpha);
long long qn_original_rank(std::size_t n);

/// Exact m-th smallest pairwise absolute difference (1-based m) via selection
/// over the implicit difference multiset; O(n log n) expected, without
/// materializing the C(n,2) values.
double kth_pairwise_difference(std::span<const double> x, long long m);

/// Number of pairs i<j with |x_i - x_j| <= t.
long long pairwise_count_leq(std::span<const double> x, double t);

/// Sequential estimates s_{1:k}, k = k_min..n.  values[n - k_min] always
/// equals the batch estimate of the full sample.  Entries at k < 4 are
/// computed but rest on very few observations and are statistically fragile.
struct PrefixCurve {
  std::size_t k_min = 2;
  std::vector<double> values;

  double at(std::size_t k) const { return values.at(k - k_min); }
  std::size_t n() const { return k_min + values.size() - 1; }
};

/// Complexity: variance/sd and gini run in O(n log n) total; mean_dev in
/// O(n^2); mad and the quantile estimators recompute per prefix, O(n^2 log n)
/// total, which is fine at desk scale (n <= 5000).
PrefixCurve prefix_estimates(std::span<const double> x, const EstimatorKind& kind);

}  // namespace scalecpt
