#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "scalecpt/estimators.hpp"

namespace scalecpt {

/// Thrown when a kernel density plug-in evaluates to a non-positive value
/// (or its bandwidth degenerates), so a quantile-based long-run variance
/// cannot be studentized.
class degenerate_density_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class HacKernel { bartlett, quartic };
enum class DensityKernel { epanechnikov };

struct HacBandwidth {
  enum class Rule { fixed, default_2n13, andrews_ar1 };
  Rule rule = Rule::default_2n13;
  double value = 0.0;  // fixed: b > 0; andrews_ar1: rho_hat

  static HacBandwidth fixed(double b);
  static HacBandwidth default_rule() { return {Rule::default_2n13, 0.0}; }
  static HacBandwidth andrews(double rho_hat);

  /// Resolved bandwidth for a sample of size n.  The Andrews rule is clamped
  /// to [1, sqrt(n)/2].
  double resolve(std::size_t n) const;
};

struct DensityBandwidth {
  enum class Rule { fixed, iqr_n13 };
  Rule rule = Rule::iqr_n13;
  double value = 0.0;  // fixed: h > 0

  static DensityBandwidth fixed(double h);
  static DensityBandwidth iqr_rule() { return {Rule::iqr_n13, 0.0}; }
};

struct LrvConfig {
  HacKernel hac_kernel = HacKernel::quartic;
  HacBandwidth hac_bandwidth = HacBandwidth::default_rule();
  DensityKernel density_kernel = DensityKernel::epanechnikov;
  DensityBandwidth density_bandwidth = DensityBandwidth::iqr_rule();
  double floor = 1e-12;  // lower clamp for the variance estimate
};

/// HAC weight W(t), t >= 0.  W(0) = 1 for both kernels.
double hac_weight(HacKernel kernel, double t);

/// AR(1)-optimal Bartlett bandwidth 1.447 n^{1/3} (4 rho^2/(1-rho^2)^2)^{1/3}.
/// Returns the raw formula value; callers clamp (rho = 0 gives 0).
double andrews_bandwidth(double rho, std::size_t n);

/// Empirical influence values of the scale estimator, plus the multiplier
/// applied to their HAC autocovariance sum (e.g. 4/u^2 for the Qn family).
struct InfluenceSeries {
  std::vector<double> xi;
  double scale_factor = 1.0;
};

InfluenceSeries influence_series(std::span<const double> x, const EstimatorKind& kind,
                                 const LrvConfig& cfg = {});

/// Epanechnikov kernel density estimate of `values` at point t.
double kde_point(std::span<const double> values, double t, double h);

/// Density estimate of the pairwise absolute differences of x at point t,
/// averaging the kernel over all C(n,2) pairs.
double pairwise_kde_point(std::span<const double> x, double t, double h);

struct LrvEstimate {
  double value = 0.0;  // clamped at cfg.floor
  double raw = 0.0;    // before clamping
  bool clamped = false;
  double hac_bandwidth = 0.0;
};

LrvEstimate lrv_estimate_details(std::span<const double> x, const EstimatorKind& kind,
                                 const LrvConfig& cfg = {});

/// Long-run variance estimate D^2 of the scale estimator.
double lrv_estimate(std::span<const double> x, const EstimatorKind& kind,
                    const LrvConfig& cfg = {});

}  // namespace scalecpt
