#include "scalecpt/lrv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace scalecpt {

namespace {

void check_finite(std::span<const double> x, const char* who) {
  for (double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(who) + ": non-finite input");
}

double epanechnikov(double t) { return std::abs(t) <= 1.0 ? 0.75 * (1.0 - t * t) : 0.0; }

// Order statistic at rank ceil(p*n) of a sorted vector.
double quantile_of_sorted(const std::vector<double>& s, double p) {
  const auto n = static_cast<double>(s.size());
  auto r = static_cast<std::size_t>(std::ceil(p * n - 1e-9));
  r = std::clamp<std::size_t>(r, 1, s.size());
  return s[r - 1];
}

// Bandwidth h_n = I_n n^{-1/3}, I_n the interquartile range of the points the
// density estimate is applied to.
double iqr_bandwidth_of(const std::vector<double>& sorted_points, std::size_t n) {
  const double iqr = quantile_of_sorted(sorted_points, 0.75) -
                     quantile_of_sorted(sorted_points, 0.25);
  return iqr * std::pow(static_cast<double>(n), -1.0 / 3.0);
}

// IQR of the pairwise-difference multiset, via rank selection.
double pairwise_iqr(std::span<const double> x) {
  const double q3 = kth_pairwise_difference(x, qn_rank(x.size(), 0.75));
  const double q1 = kth_pairwise_difference(x, qn_rank(x.size(), 0.25));
  return q3 - q1;
}

double resolve_density_bandwidth(const DensityBandwidth& bw, double iqr_based_h,
                                 const char* who) {
  double h = bw.rule == DensityBandwidth::Rule::fixed ? bw.value : iqr_based_h;
  if (!(h > 0.0))
    throw degenerate_density_error(std::string(who) +
                                   ": density bandwidth degenerated to a non-positive value");
  return h;
}

}  // namespace

HacBandwidth HacBandwidth::fixed(double b) {
  if (!(b > 0.0)) throw std::invalid_argument("HAC bandwidth must be > 0");
  return {Rule::fixed, b};
}

HacBandwidth HacBandwidth::andrews(double rho_hat) {
  if (!(rho_hat > -1.0 && rho_hat < 1.0))
    throw std::invalid_argument("andrews bandwidth: |rho| must be < 1");
  return {Rule::andrews_ar1, rho_hat};
}

double HacBandwidth::resolve(std::size_t n) const {
  switch (rule) {
    case Rule::fixed:
      return value;
    case Rule::default_2n13:
      return 2.0 * std::cbrt(static_cast<double>(n));
    case Rule::andrews_ar1: {
      const double b = andrews_bandwidth(value, n);
      return std::clamp(b, 1.0, std::sqrt(static_cast<double>(n)) / 2.0);
    }
  }
  return 0.0;
}

DensityBandwidth DensityBandwidth::fixed(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("density bandwidth must be > 0");
  return {Rule::fixed, h};
}

double hac_weight(HacKernel kernel, double t) {
  if (t < 0.0) throw std::invalid_argument("hac_weight: t must be >= 0");
  switch (kernel) {
    case HacKernel::bartlett:
      return std::max(0.0, 1.0 - t);
    case HacKernel::quartic: {
      if (t > 1.0) return 0.0;
      const double w = 1.0 - t * t;
      return w * w;
    }
  }
  return 0.0;
}

double andrews_bandwidth(double rho, std::size_t n) {
  if (!(rho > -1.0 && rho < 1.0)) throw std::invalid_argument("andrews_bandwidth: |rho| < 1");
  const double r2 = rho * rho;
  const double q = 4.0 * r2 / ((1.0 - r2) * (1.0 - r2));
  return 1.447 * std::cbrt(static_cast<double>(n)) * std::cbrt(q);
}

double kde_point(std::span<const double> values, double t, double h) {
  if (values.empty()) throw std::invalid_argument("kde_point: empty sample");
  if (!(h > 0.0)) throw std::invalid_argument("kde_point: bandwidth must be > 0");
  double acc = 0.0;
  for (double v : values) acc += epanechnikov((v - t) / h);
  return acc / (static_cast<double>(values.size()) * h);
}

double pairwise_kde_point(std::span<const double> x, double t, double h) {
  if (x.size() < 2) throw std::invalid_argument("pairwise_kde_point: needs n >= 2");
  if (!(h > 0.0)) throw std::invalid_argument("pairwise_kde_point: bandwidth must be > 0");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  // Only pairs with difference in [t-h, t+h] contribute.
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    auto first = std::lower_bound(s.begin() + static_cast<std::ptrdiff_t>(i) + 1, s.end(),
                                  s[i] + (t - h));
    for (auto it = first; it != s.end(); ++it) {
      const double d = *it - s[i];
      if (d > t + h) break;
      acc += epanechnikov((d - t) / h);
    }
  }
  const auto n = static_cast<double>(s.size());
  return 2.0 * acc / (n * (n - 1.0) * h);
}

InfluenceSeries influence_series(std::span<const double> x, const EstimatorKind& kind,
                                 const LrvConfig& cfg) {
  kind.validate();
  if (x.size() < 2) throw std::invalid_argument("influence_series: needs n >= 2");
  check_finite(x, "influence_series");
  const std::size_t n = x.size();
  InfluenceSeries out;
  out.xi.resize(n);

  switch (kind.kind) {
    case ScaleKind::variance:
    case ScaleKind::sd: {
      const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
      const double var = sample_variance(x);
      for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - mean;
        out.xi[i] = d * d - var;
      }
      // sd is the root of the variance; delta method divides by (2 sigma)^2.
      out.scale_factor = kind.kind == ScaleKind::variance ? 1.0 : 1.0 / (4.0 * var);
      break;
    }
    case ScaleKind::mean_dev: {
      const double med = sample_median(x);
      const double d = mean_deviation(x);
      for (std::size_t i = 0; i < n; ++i) out.xi[i] = std::abs(x[i] - med) - d;
      out.scale_factor = 1.0;
      break;
    }
    case ScaleKind::gini: {
      const double g = gini_mean_difference(x);
      std::vector<double> s(x.begin(), x.end());
      std::sort(s.begin(), s.end());
      std::vector<double> prefix(n + 1, 0.0);
      for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + s[i];
      for (std::size_t i = 0; i < n; ++i) {
        const double v = x[i];
        const auto r = static_cast<std::size_t>(
            std::upper_bound(s.begin(), s.end(), v) - s.begin());
        const double below = static_cast<double>(r) * v - prefix[r];
        const double above = (prefix[n] - prefix[r]) - static_cast<double>(n - r) * v;
        out.xi[i] = (below + above) / static_cast<double>(n) - g;
      }
      out.scale_factor = 4.0;
      break;
    }
    case ScaleKind::mad: {
      const double med = sample_median(x);
      const double m = mad(x);
      std::vector<double> z(n);
      for (std::size_t i = 0; i < n; ++i) z[i] = std::abs(x[i] - med);
      std::vector<double> zs(z);
      std::sort(zs.begin(), zs.end());
      const double h =
          resolve_density_bandwidth(cfg.density_bandwidth, iqr_bandwidth_of(zs, n), "mad");
      const double f = kde_point(z, m, h);
      if (!(f > 0.0))
        throw degenerate_density_error("mad: density estimate at the MAD is not positive");
      for (std::size_t i = 0; i < n; ++i) out.xi[i] = (z[i] <= m ? 0.5 : -0.5);
      out.scale_factor = 1.0 / (f * f);
      break;
    }
    case ScaleKind::qn_alpha:
    case ScaleKind::qn_original: {
      const long long total = pair_count(n);
      const long long rank = kind.kind == ScaleKind::qn_alpha ? qn_rank(n, kind.alpha)
                                                              : qn_original_rank(n);
      const double alpha = kind.kind == ScaleKind::qn_alpha
                               ? kind.alpha
                               : static_cast<double>(rank) / static_cast<double>(total);
      const double q = kth_pairwise_difference(x, rank);
      const double h = resolve_density_bandwidth(
          cfg.density_bandwidth,
          pairwise_iqr(x) * std::pow(static_cast<double>(n), -1.0 / 3.0), "qn");
      const double u = pairwise_kde_point(x, q, h);
      if (!(u > 0.0))
        throw degenerate_density_error(
            "qn: pairwise-difference density estimate at the quantile is not positive");
      std::vector<double> s(x.begin(), x.end());
      std::sort(s.begin(), s.end());
      for (std::size_t i = 0; i < n; ++i) {
        const double v = x[i];
        const auto lo = std::lower_bound(s.begin(), s.end(), v - q);
        const auto hi = std::upper_bound(s.begin(), s.end(), v + q);
        out.xi[i] = static_cast<double>(hi - lo) / static_cast<double>(n) - alpha;
      }
      out.scale_factor = 4.0 / (u * u);
      break;
    }
  }
  return out;
}

LrvEstimate lrv_estimate_details(std::span<const double> x, const EstimatorKind& kind,
                                 const LrvConfig& cfg) {
  if (x.size() < 4) throw std::invalid_argument("lrv_estimate: needs n >= 4");
  check_finite(x, "lrv_estimate");
  const InfluenceSeries infl = influence_series(x, kind, cfg);
  const std::size_t n = x.size();
  const double b = cfg.hac_bandwidth.resolve(n);

  const auto& xi = infl.xi;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += xi[i] * xi[i];
  for (std::size_t k = 1; k < n; ++k) {
    const double w = hac_weight(cfg.hac_kernel, static_cast<double>(k) / b);
    if (w == 0.0) break;
    double g = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) g += xi[i] * xi[i + k];
    total += 2.0 * w * g;
  }
  total /= static_cast<double>(n);

  LrvEstimate est;
  est.raw = infl.scale_factor * total;
  est.hac_bandwidth = b;
  est.clamped = est.raw < cfg.floor;
  est.value = est.clamped ? cfg.floor : est.raw;
  return est;
}

double lrv_estimate(std::span<const double> x, const EstimatorKind& kind, const LrvConfig& cfg) {
  return lrv_estimate_details(x, kind, cfg).value;
}

}  // namespace scalecpt
