#pragma once

#include <span>
#include <vector>

#include "scalecpt/dgp.hpp"
#include "scalecpt/estimators.hpp"

namespace scalecpt {

enum class AsvMethod { closed_form, quadrature };

struct AsvReport {
  EstimatorKind estimator;
  DistributionSpec dist;
  double population_value = 0.0;  // the estimated scale functional at dist
  double asv = 0.0;               // asymptotic variance under i.i.d. sampling
  AsvMethod method = AsvMethod::quadrature;
};

/// Density u of |X - Y| for X, Y i.i.d. from dist, evaluated at x >= 0.
/// Closed forms for normal, Laplace, normal mixtures, and t_1; convolution
/// quadrature otherwise.
double u_density(const DistributionSpec& dist, double x);

/// CDF U of |X - Y| at x >= 0.
double u_cdf(const DistributionSpec& dist, double x);

/// Population quantile Q^alpha = U^{-1}(alpha).
double q_alpha_population(const DistributionSpec& dist, double alpha);

/// Asymptotic variance of the pairwise-difference quantile at level alpha:
/// 4 E psi^2(X) / u^2(Q^alpha).
AsvReport asv_qn_alpha(const DistributionSpec& dist, double alpha);

/// Closed-form counterpart of asv_qn_alpha for the standard Laplace law,
/// used as an independent cross-check of the quadrature route.
double asv_qn_alpha_laplace_closed(double alpha);

/// Asymptotic variance (nu+3) s^2 / (2 nu) of the t_nu scale MLE.
double t_scale_mle_asv(double nu, double s);

/// Fisher information E[(d/ds log f_{nu,s}(X))^2] by quadrature; the closed
/// form is 2 nu / ((nu+3) s^2).
double t_scale_fisher_information(double nu, double s);

/// ARE(s1, s2) = ASV2/ASV1 * (val1/val2)^2.
double are(double asv1, double val1, double asv2, double val2);

struct AlphaAre {
  double alpha = 0.0;
  double are = 0.0;
};

/// Efficiency of the pairwise-difference quantile against the family's
/// reference scale estimator: sd at the normal, mean deviation at the
/// Laplace, and the scale MLE at t_nu.
std::vector<AlphaAre> are_curve(const DistributionSpec& dist, std::span<const double> alpha_grid);

/// ASV(variance) = E Y^4 - (E Y^2)^2 by closed-form moments; domain error
/// when the fourth moment is infinite.
double asv_moment_variance(const DistributionSpec& dist);

/// ASV(mean deviation) = E Y^2 - (E |Y|)^2 (median-symmetric families).
double asv_moment_mean_dev(const DistributionSpec& dist);

/// ASV of Gini's mean difference: 4 E phi^2(X), phi(x) = E|x - Y| - g(F).
double asv_gini(const DistributionSpec& dist);

/// Population value g(F) = E|X - Y|.
double gini_population(const DistributionSpec& dist);

/// Population mean deviation E|X - md(F)| (symmetric families).
double mean_dev_population(const DistributionSpec& dist);

/// Population standard deviation.
double sd_population(const DistributionSpec& dist);

}  // namespace scalecpt
