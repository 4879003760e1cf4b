#include "scalecpt/cpt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scalecpt {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

std::vector<double> cusum_curve(std::span<const double> x, const EstimatorKind& kind) {
  if (x.size() < 4) throw std::invalid_argument("cusum_curve: needs n >= 4");
  const PrefixCurve pc = prefix_estimates(x, kind);
  const double s_full = pc.values.back();
  const double root_n = std::sqrt(static_cast<double>(x.size()));
  std::vector<double> out(pc.values.size());
  for (std::size_t i = 0; i < pc.values.size(); ++i) {
    const auto k = static_cast<double>(pc.k_min + i);
    out[i] = k / root_n * std::abs(pc.values[i] - s_full);
  }
  return out;
}

double kolmogorov_cdf(double q) {
  if (q <= 0.0) return 0.0;
  if (q < 0.2) {
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double a = static_cast<double>(2 * k - 1) * kPi;
      const double term = std::exp(-a * a / (8.0 * q * q));
      sum += term;
      if (term < 1e-14) break;
    }
    return std::sqrt(2.0 * kPi) / q * sum;
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * static_cast<double>(k) * static_cast<double>(k) * q * q);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-14) break;
  }
  return std::clamp(1.0 - 2.0 * sum, 0.0, 1.0);
}

TestResult detect(std::span<const double> x, const EstimatorKind& kind, const LrvConfig& cfg) {
  if (x.size() < 4) throw std::invalid_argument("detect: needs n >= 4");
  TestResult r;
  r.estimator = kind;
  r.curve = cusum_curve(x, kind);
  const LrvEstimate lrv = lrv_estimate_details(x, kind, cfg);
  r.lrv = lrv.value;
  r.lrv_clamped = lrv.clamped;
  r.short_series = x.size() < 30;
  const double root_lrv = std::sqrt(lrv.value);
  for (double& v : r.curve) v /= root_lrv;
  std::size_t argmax = 0;
  for (std::size_t i = 1; i < r.curve.size(); ++i)
    if (r.curve[i] > r.curve[argmax]) argmax = i;
  r.statistic = r.curve[argmax];
  r.change_index = 2 + argmax;
  r.p_value = 1.0 - kolmogorov_cdf(r.statistic);
  return r;
}

}  // namespace scalecpt
