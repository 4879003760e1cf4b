#include "scalecpt/asymptotics.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "quadrature.hpp"

namespace scalecpt {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double normal_density_var(double x, double v) {
  return std::exp(-x * x / (2.0 * v)) / std::sqrt(2.0 * kPi * v);
}

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double laplace_scale(const DistributionSpec& d) { return d.p2; }
double normal_sigma(const DistributionSpec& d) { return std::sqrt(d.p2); }

// Mixture components of X - Y for the normal mixture: (weight, variance).
struct MixPair {
  double w;
  double v;
};

std::array<MixPair, 3> nm_difference_components(const DistributionSpec& d) {
  const double g = d.p1, e = d.p2;
  return {MixPair{e * e, 2.0 * g * g}, MixPair{2.0 * e * (1.0 - e), g * g + 1.0},
          MixPair{(1.0 - e) * (1.0 - e), 2.0}};
}

// E|x - Z| for Z standard normal.
double mean_abs_dev_normal(double z) {
  return 2.0 * normal_density_var(z, 1.0) + z * (2.0 * standard_normal_cdf(z) - 1.0);
}

// E|x - Y| for Y ~ dist, with the location parameter removed.  Closed forms
// where the family admits them, quadrature for general t.
double expected_abs_distance(const DistributionSpec& dist, double x) {
  switch (dist.family) {
    case Family::normal: {
      const double s = normal_sigma(dist);
      const double z = (x - dist.p1) / s;
      return s * mean_abs_dev_normal(z);
    }
    case Family::laplace: {
      const double b = laplace_scale(dist);
      const double z = std::abs(x - dist.p1) / b;
      return b * (z + std::exp(-z));
    }
    case Family::normal_mixture: {
      const double g = dist.p1, e = dist.p2;
      return e * g * mean_abs_dev_normal(x / g) + (1.0 - e) * mean_abs_dev_normal(x);
    }
    case Family::student_t: {
      if (!(dist.p1 > 1.0))
        throw std::domain_error("expected_abs_distance: E|X| infinite for t_nu with nu <= 1");
      return detail::integrate_line_ts(
          [&](double y) { return std::abs(x - y) * density(dist, y); }, 1e-10);
    }
  }
  return 0.0;
}

double u_inverse_by_bisection(const DistributionSpec& dist, double alpha, double lo_hint) {
  double lo = std::max(0.0, lo_hint);
  if (lo > 0.0 && u_cdf(dist, lo) > alpha) lo = 0.0;
  double hi = std::max(1.0, 2.0 * lo);
  int guard = 0;
  while (u_cdf(dist, hi) < alpha) {
    hi *= 2.0;
    if (++guard > 2000) throw std::runtime_error("u_inverse: bracket expansion failed");
  }
  while (hi - lo > 1e-12 * std::max(1.0, hi)) {
    const double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi) break;
    if (u_cdf(dist, mid) < alpha)
      lo = mid;
    else
      hi = mid;
  }
  return lo + (hi - lo) / 2.0;
}

struct Reference {
  double asv;
  double value;
};

Reference reference_estimator(const DistributionSpec& dist) {
  switch (dist.family) {
    case Family::normal: {
      const double s = normal_sigma(dist);
      return {s * s / 2.0, s};
    }
    case Family::laplace: {
      const double b = laplace_scale(dist);
      return {b * b, b};
    }
    case Family::student_t:
      return {t_scale_mle_asv(dist.p1, 1.0), 1.0};
    case Family::normal_mixture:
      throw std::invalid_argument(
          "are_curve: no reference scale estimator is defined for normal mixtures");
  }
  throw std::invalid_argument("are_curve: unsupported family");
}

}  // namespace

double u_density(const DistributionSpec& dist, double x) {
  dist.validate();
  if (x < 0.0) throw std::invalid_argument("u_density: x must be >= 0");
  switch (dist.family) {
    case Family::normal: {
      const double s = normal_sigma(dist);
      return std::exp(-x * x / (4.0 * s * s)) / (s * std::sqrt(kPi));
    }
    case Family::laplace: {
      const double b = laplace_scale(dist);
      const double z = x / b;
      return 0.5 * (1.0 + z) * std::exp(-z) / b;
    }
    case Family::normal_mixture: {
      double acc = 0.0;
      for (const auto& c : nm_difference_components(dist)) acc += c.w * normal_density_var(x, c.v);
      return 2.0 * acc;
    }
    case Family::student_t: {
      if (dist.p1 == 1.0) return 4.0 / (kPi * (x * x + 4.0));
      return 2.0 * detail::integrate_line_gk(
                       [&](double t) { return density(dist, t) * density(dist, t - x); }, 1e-10);
    }
  }
  return 0.0;
}

double u_cdf(const DistributionSpec& dist, double x) {
  dist.validate();
  if (x <= 0.0) return 0.0;
  switch (dist.family) {
    case Family::normal: {
      const double s = normal_sigma(dist);
      return 2.0 * standard_normal_cdf(x / (std::sqrt(2.0) * s)) - 1.0;
    }
    case Family::laplace: {
      const double z = x / laplace_scale(dist);
      return 1.0 - std::exp(-z) - z / 2.0 * std::exp(-z);
    }
    case Family::normal_mixture: {
      double acc = 0.0;
      for (const auto& c : nm_difference_components(dist))
        acc += c.w * (2.0 * standard_normal_cdf(x / std::sqrt(c.v)) - 1.0);
      return acc;
    }
    case Family::student_t: {
      if (dist.p1 == 1.0) return 2.0 / kPi * std::atan(x / 2.0);
      return detail::integrate_line_gk(
          [&](double t) { return (cdf(dist, t + x) - cdf(dist, t - x)) * density(dist, t); },
          1e-10);
    }
  }
  return 0.0;
}

double q_alpha_population(const DistributionSpec& dist, double alpha) {
  dist.validate();
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("q_alpha_population: alpha must be in (0,1)");
  switch (dist.family) {
    case Family::normal:
      return 2.0 * normal_sigma(dist) * boost::math::erf_inv(alpha);
    case Family::student_t:
      if (dist.p1 == 1.0) return 2.0 * std::tan(kPi * alpha / 2.0);
      return u_inverse_by_bisection(dist, alpha, 0.0);
    case Family::laplace:
    case Family::normal_mixture:
      return u_inverse_by_bisection(dist, alpha, 0.0);
  }
  return 0.0;
}

AsvReport asv_qn_alpha(const DistributionSpec& dist, double alpha) {
  dist.validate();
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("asv_qn_alpha: alpha must be in (0,1)");
  const double q = q_alpha_population(dist, alpha);
  const double uq = u_density(dist, q);
  const double integral = detail::integrate_line_gk(
      [&](double x) {
        const double d = cdf(dist, x + q) - cdf(dist, x - q);
        return d * d * density(dist, x);
      },
      1e-10);
  const double epsi2 = integral - alpha * alpha;
  AsvReport r;
  r.estimator = EstimatorKind::qn(alpha);
  r.dist = dist;
  r.population_value = q;
  r.asv = 4.0 * epsi2 / (uq * uq);
  r.method = AsvMethod::quadrature;
  if (!(r.asv > 0.0) || !std::isfinite(r.asv))
    throw std::runtime_error("asv_qn_alpha: quadrature produced a non-positive value");
  return r;
}

double asv_qn_alpha_laplace_closed(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("asv_qn_alpha_laplace_closed: alpha must be in (0,1)");
  const DistributionSpec lap = DistributionSpec::laplace(0.0, 1.0);
  const double q = u_inverse_by_bisection(lap, alpha, 0.0);
  const double eq = std::exp(-q);
  const double one_minus = 1.0 - eq;
  const double num = 1.0 - (1.0 + q) * eq - eq * one_minus * one_minus / 6.0 - alpha * alpha;
  const double den = (1.0 + q) * (1.0 + q) * eq * eq;
  return 16.0 * num / den;
}

double t_scale_mle_asv(double nu, double s) {
  if (!(nu > 0.0)) throw std::invalid_argument("t_scale_mle_asv: nu must be > 0");
  if (!(s > 0.0)) throw std::invalid_argument("t_scale_mle_asv: s must be > 0");
  return (nu + 3.0) * s * s / (2.0 * nu);
}

double t_scale_fisher_information(double nu, double s) {
  if (!(nu > 0.0)) throw std::invalid_argument("t_scale_fisher_information: nu must be > 0");
  if (!(s > 0.0)) throw std::invalid_argument("t_scale_fisher_information: s must be > 0");
  // Substituting x = s sqrt(nu) tan(w) turns E[(d/ds log f)^2] into
  //   (c_nu sqrt(nu)/s^2) Int ((nu+1) sin^2 w - 1)^2 (cos w)^{nu-1} dw,
  // with an integrable endpoint singularity when nu < 1.  The distance d to
  // the nearer endpoint gives cos(w) = sin(d) and sin^2(w) = cos^2(d).
  const double c_nu =
      std::exp(std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0)) / std::sqrt(nu * kPi);
  auto g = [&](double /*w*/, double d) {
    if (d < 1e-100) return 0.0;
    const double cw = std::sin(d);
    const double s2w = std::cos(d) * std::cos(d);
    const double a = (nu + 1.0) * s2w - 1.0;
    return a * a * std::pow(cw, nu - 1.0);
  };
  const double integral = detail::integrate_ts2(g, -detail::kHalfPi, detail::kHalfPi, 1e-10);
  return c_nu * std::sqrt(nu) / (s * s) * integral;
}

double are(double asv1, double val1, double asv2, double val2) {
  if (!(asv1 > 0.0 && val1 > 0.0 && asv2 > 0.0 && val2 > 0.0))
    throw std::invalid_argument("are: all inputs must be positive");
  const double ratio = val1 / val2;
  return asv2 / asv1 * ratio * ratio;
}

std::vector<AlphaAre> are_curve(const DistributionSpec& dist,
                                std::span<const double> alpha_grid) {
  dist.validate();
  const Reference ref = reference_estimator(dist);
  for (double a : alpha_grid)
    if (!(a > 0.0 && a < 1.0))
      throw std::invalid_argument("are_curve: grid values must lie in (0,1)");

  std::vector<std::size_t> order(alpha_grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return alpha_grid[a] < alpha_grid[b]; });

  const bool closed_q = dist.family == Family::normal ||
                        (dist.family == Family::student_t && dist.p1 == 1.0);
  std::vector<AlphaAre> out(alpha_grid.size());
  double q_hint = 0.0;
  for (std::size_t idx : order) {
    const double alpha = alpha_grid[idx];
    const double q = closed_q ? q_alpha_population(dist, alpha)
                              : u_inverse_by_bisection(dist, alpha, q_hint);
    q_hint = q;
    const double uq = u_density(dist, q);
    const double integral = detail::integrate_line_gk(
        [&](double x) {
          const double d = cdf(dist, x + q) - cdf(dist, x - q);
          return d * d * density(dist, x);
        },
        1e-10);
    const double asv = 4.0 * (integral - alpha * alpha) / (uq * uq);
    out[idx] = {alpha, are(asv, q, ref.asv, ref.value)};
  }
  return out;
}

double asv_moment_variance(const DistributionSpec& dist) {
  dist.validate();
  switch (dist.family) {
    case Family::normal: {
      const double v = dist.p2;
      return 2.0 * v * v;
    }
    case Family::laplace: {
      const double b2 = dist.p2 * dist.p2;
      return 20.0 * b2 * b2;
    }
    case Family::normal_mixture: {
      const double g2 = dist.p1 * dist.p1, e = dist.p2;
      const double m2 = e * g2 + 1.0 - e;
      const double m4 = 3.0 * (e * g2 * g2 + 1.0 - e);
      return m4 - m2 * m2;
    }
    case Family::student_t: {
      const double nu = dist.p1;
      if (!(nu > 4.0))
        throw std::domain_error("asv_moment_variance: fourth moment infinite for nu <= 4");
      const double m2 = nu / (nu - 2.0);
      const double m4 = 3.0 * nu * nu / ((nu - 2.0) * (nu - 4.0));
      return m4 - m2 * m2;
    }
  }
  return 0.0;
}

double asv_moment_mean_dev(const DistributionSpec& dist) {
  dist.validate();
  const double m1 = mean_dev_population(dist);
  switch (dist.family) {
    case Family::normal:
      return dist.p2 - m1 * m1;
    case Family::laplace:
      return 2.0 * dist.p2 * dist.p2 - m1 * m1;
    case Family::normal_mixture: {
      const double g2 = dist.p1 * dist.p1, e = dist.p2;
      return e * g2 + 1.0 - e - m1 * m1;
    }
    case Family::student_t: {
      const double nu = dist.p1;
      if (!(nu > 2.0))
        throw std::domain_error("asv_moment_mean_dev: second moment infinite for nu <= 2");
      return nu / (nu - 2.0) - m1 * m1;
    }
  }
  return 0.0;
}

double gini_population(const DistributionSpec& dist) {
  dist.validate();
  switch (dist.family) {
    case Family::normal:
      return 2.0 * normal_sigma(dist) / std::sqrt(kPi);
    case Family::laplace:
      return 1.5 * laplace_scale(dist);
    case Family::normal_mixture: {
      double acc = 0.0;
      for (const auto& c : nm_difference_components(dist))
        acc += c.w * std::sqrt(2.0 * c.v / kPi);
      return acc;
    }
    case Family::student_t: {
      if (!(dist.p1 > 1.0))
        throw std::domain_error("gini_population: E|X - Y| infinite for nu <= 1");
      return detail::integrate_halfline_ts([&](double x) { return x * u_density(dist, x); },
                                           1e-10);
    }
  }
  return 0.0;
}

double mean_dev_population(const DistributionSpec& dist) {
  dist.validate();
  switch (dist.family) {
    case Family::normal:
      return normal_sigma(dist) * std::sqrt(2.0 / kPi);
    case Family::laplace:
      return laplace_scale(dist);
    case Family::normal_mixture:
      return std::sqrt(2.0 / kPi) * (dist.p2 * dist.p1 + 1.0 - dist.p2);
    case Family::student_t: {
      const double nu = dist.p1;
      if (!(nu > 1.0))
        throw std::domain_error("mean_dev_population: E|X| infinite for nu <= 1");
      return 2.0 * std::sqrt(nu) *
             std::exp(std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0)) /
             (std::sqrt(kPi) * (nu - 1.0));
    }
  }
  return 0.0;
}

double sd_population(const DistributionSpec& dist) {
  dist.validate();
  switch (dist.family) {
    case Family::normal:
      return normal_sigma(dist);
    case Family::laplace:
      return std::sqrt(2.0) * laplace_scale(dist);
    case Family::normal_mixture:
      return std::sqrt(dist.p2 * dist.p1 * dist.p1 + 1.0 - dist.p2);
    case Family::student_t: {
      const double nu = dist.p1;
      if (!(nu > 2.0)) throw std::domain_error("sd_population: variance infinite for nu <= 2");
      return std::sqrt(nu / (nu - 2.0));
    }
  }
  return 0.0;
}

double asv_gini(const DistributionSpec& dist) {
  dist.validate();
  if (dist.family == Family::student_t && !(dist.p1 > 2.0))
    throw std::domain_error("asv_gini: needs a finite second moment (nu > 2)");
  const double g = gini_population(dist);
  auto integrand = [&](double x) {
    const double phi_x = expected_abs_distance(dist, x) - g;
    return phi_x * phi_x * density(dist, x);
  };
  const double var_phi = dist.family == Family::student_t
                             ? detail::integrate_line_ts(integrand, 1e-9)
                             : detail::integrate_line_gk(integrand, 1e-10);
  return 4.0 * var_phi;
}

}  // namespace scalecpt
