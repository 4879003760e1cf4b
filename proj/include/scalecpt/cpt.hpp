#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scalecpt/estimators.hpp"
#include "scalecpt/lrv.hpp"

namespace scalecpt {

struct TestResult {
  double statistic = 0.0;        // max of the studentized curve
  double p_value = 1.0;          // 1 - kolmogorov_cdf(statistic)
  std::size_t change_index = 0;  // first k attaining the max, k in [2, n]
  std::vector<double> curve;     // studentized process over k = 2..n
  double lrv = 0.0;
  EstimatorKind estimator;
  bool lrv_clamped = false;
  bool short_series = false;  // n < 30; asymptotics unreliable
};

/// Unstudentized CUSUM process (k/sqrt(n)) |s_{1:k} - s_{1:n}| for k = 2..n.
/// The final entry is exactly 0.
std::vector<double> cusum_curve(std::span<const double> x, const EstimatorKind& kind);

/// CDF of sup_{0<=t<=1} |B(t)| for a Brownian bridge B (Kolmogorov
/// distribution).  Series truncated once terms fall below 1e-14; the
/// theta-dual series is used for q < 0.2.
double kolmogorov_cdf(double q);

TestResult detect(std::span<const double> x, const EstimatorKind& kind,
                  const LrvConfig& cfg = {});

}  // namespace scalecpt
