#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace scalecpt {

enum class Family { normal, laplace, normal_mixture, student_t };

/// Innovation distribution. Parameter meaning depends on the family:
///   normal(mu, sigma2), laplace(mu, alpha), normal_mixture(gamma, eps),
///   student_t(nu).
struct DistributionSpec {
  Family family = Family::normal;
  double p1 = 0.0;
  double p2 = 1.0;

  static DistributionSpec normal(double mu = 0.0, double sigma2 = 1.0);
  static DistributionSpec laplace(double mu = 0.0, double alpha = 1.0);
  static DistributionSpec normal_mixture(double gamma, double eps);
  static DistributionSpec student_t(double nu);

  std::string name() const;
  void validate() const;
};

/// Parse "normal", "normal(0,1)", "laplace(0,2)", "nm(3,0.01)", "t3", "t(2.5)".
DistributionSpec parse_distribution(const std::string& text);

double density(const DistributionSpec& dist, double x);
double cdf(const DistributionSpec& dist, double x);

/// Excess kurtosis; +infinity for t_nu with nu <= 4.
double kurtosis(const DistributionSpec& dist);

bool has_finite_variance(const DistributionSpec& dist);

/// One draw from the innovation law.
double sample_innovation(const DistributionSpec& dist, std::mt19937_64& rng);

/// AR(1) series with a single multiplicative scale change:
///   Y_i = rho * Y_{i-1} + eps_i,
///   X_i = Y_i + mu            for i <= floor(theta*n),
///   X_i = lambda * Y_i + mu   for i >  floor(theta*n).
struct SeriesSpec {
  DistributionSpec dist;
  double rho = 0.0;
  std::size_t n = 0;
  double lambda = 1.0;
  double theta = 0.5;
  double mu = 0.0;
  std::uint64_t seed = 0;

  std::size_t change_index() const;  // floor(theta*n)
  void validate() const;
};

std::vector<double> sample_series(const SeriesSpec& spec, std::mt19937_64& rng);
std::vector<double> sample_series(const SeriesSpec& spec);  // seeds from spec.seed

}  // namespace scalecpt
