#include "scalecpt/dgp.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace scalecpt {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Uniform deviate in the open interval (0,1): 53 random bits, half-ulp offset.
double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& rng) {
  const double u = uniform01(rng);
  return std::sqrt(2.0) * boost::math::erf_inv(2.0 * u - 1.0);
}

// Marsaglia-Tsang gamma sampler, shape a, unit scale.
double gamma_draw(double a, std::mt19937_64& rng) {
  if (a < 1.0) {
    const double u = uniform01(rng);
    return gamma_draw(a + 1.0, rng) * std::pow(u, 1.0 / a);
  }
  const double d = a - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z = standard_normal(rng);
    double v = 1.0 + c * z;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform01(rng);
    if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) return d * v;
  }
}

std::string format_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

double normal_density(double x, double mu, double sigma2) {
  const double z = x - mu;
  return std::exp(-z * z / (2.0 * sigma2)) / std::sqrt(2.0 * kPi * sigma2);
}

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

DistributionSpec DistributionSpec::normal(double mu, double sigma2) {
  DistributionSpec d{Family::normal, mu, sigma2};
  d.validate();
  return d;
}

DistributionSpec DistributionSpec::laplace(double mu, double alpha) {
  DistributionSpec d{Family::laplace, mu, alpha};
  d.validate();
  return d;
}

DistributionSpec DistributionSpec::normal_mixture(double gamma, double eps) {
  DistributionSpec d{Family::normal_mixture, gamma, eps};
  d.validate();
  return d;
}

DistributionSpec DistributionSpec::student_t(double nu) {
  DistributionSpec d{Family::student_t, nu, 0.0};
  d.validate();
  return d;
}

void DistributionSpec::validate() const {
  switch (family) {
    case Family::normal:
      if (!(p2 > 0.0)) throw std::invalid_argument("normal: sigma^2 must be > 0");
      break;
    case Family::laplace:
      if (!(p2 > 0.0)) throw std::invalid_argument("laplace: alpha must be > 0");
      break;
    case Family::normal_mixture:
      if (!(p1 >= 1.0)) throw std::invalid_argument("normal_mixture: gamma must be >= 1");
      if (!(p2 >= 0.0 && p2 <= 1.0))
        throw std::invalid_argument("normal_mixture: eps must be in [0,1]");
      break;
    case Family::student_t:
      if (!(p1 > 0.0)) throw std::invalid_argument("student_t: nu must be > 0");
      break;
  }
}

std::string DistributionSpec::name() const {
  switch (family) {
    case Family::normal:
      return "normal(" + format_param(p1) + "," + format_param(p2) + ")";
    case Family::laplace:
      return "laplace(" + format_param(p1) + "," + format_param(p2) + ")";
    case Family::normal_mixture:
      return "nm(" + format_param(p1) + "," + format_param(p2) + ")";
    case Family::student_t:
      return "t(" + format_param(p1) + ")";
  }
  return "?";
}

DistributionSpec parse_distribution(const std::string& text) {
  const auto fail = [&]() -> DistributionSpec {
    throw std::invalid_argument("unrecognized distribution: '" + text + "'");
  };
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) return fail();

  auto args = [&](std::size_t open) -> std::vector<double> {
    std::vector<double> out;
    if (s.back() != ')') return out;
    std::size_t pos = open + 1;
    const std::size_t end = s.size() - 1;
    while (pos < end) {
      std::size_t next = std::min(s.find(',', pos), end);
      std::size_t used = 0;
      const std::string tok = s.substr(pos, next - pos);
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        fail();
      }
      if (used != tok.size()) fail();
      out.push_back(v);
      pos = next + 1;
    }
    return out;
  };

  const std::size_t open = s.find('(');
  const std::string head = s.substr(0, open);
  if (head == "normal" || head == "n") {
    if (open == std::string::npos) return DistributionSpec::normal();
    auto a = args(open);
    if (a.size() != 2) return fail();
    return DistributionSpec::normal(a[0], a[1]);
  }
  if (head == "laplace" || head == "l") {
    if (open == std::string::npos) return DistributionSpec::laplace();
    auto a = args(open);
    if (a.size() != 2) return fail();
    return DistributionSpec::laplace(a[0], a[1]);
  }
  if (head == "nm" || head == "normal_mixture") {
    if (open == std::string::npos) return fail();
    auto a = args(open);
    if (a.size() != 2) return fail();
    return DistributionSpec::normal_mixture(a[0], a[1]);
  }
  if (head == "t") {
    if (open == std::string::npos) return fail();
    auto a = args(open);
    if (a.size() != 1) return fail();
    return DistributionSpec::student_t(a[0]);
  }
  if (head == "cauchy") return DistributionSpec::student_t(1.0);
  if (!head.empty() && head[0] == 't' && open == std::string::npos) {
    try {
      return DistributionSpec::student_t(std::stod(head.substr(1)));
    } catch (const std::exception&) {
      return fail();
    }
  }
  return fail();
}

double density(const DistributionSpec& dist, double x) {
  dist.validate();
  switch (dist.family) {
    case Family::normal:
      return normal_density(x, dist.p1, dist.p2);
    case Family::laplace:
      return std::exp(-std::abs(x - dist.p1) / dist.p2) / (2.0 * dist.p2);
    case Family::normal_mixture: {
      const double gamma = dist.p1, eps = dist.p2;
      return eps * normal_density(x, 0.0, gamma * gamma) + (1.0 - eps) * normal_density(x, 0.0, 1.0);
    }
    case Family::student_t: {
      const double nu = dist.p1;
      const double c =
          std::exp(std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0)) / std::sqrt(nu * kPi);
      return c * std::pow(1.0 + x * x / nu, -(nu + 1.0) / 2.0);
    }
  }
  return 0.0;
}

double cdf(const DistributionSpec& dist, double x) {
  dist.validate();
  switch (dist.family) {
    case Family::normal:
      return standard_normal_cdf((x - dist.p1) / std::sqrt(dist.p2));
    case Family::laplace: {
      const double z = (x - dist.p1) / dist.p2;
      return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
    }
    case Family::normal_mixture: {
      const double gamma = dist.p1, eps = dist.p2;
      return eps * standard_normal_cdf(x / gamma) + (1.0 - eps) * standard_normal_cdf(x);
    }
    case Family::student_t: {
      boost::math::students_t_distribution<double> t(dist.p1);
      return boost::math::cdf(t, x);
    }
  }
  return 0.0;
}

double kurtosis(const DistributionSpec& dist) {
  dist.validate();
  switch (dist.family) {
    case Family::normal:
      return 0.0;
    case Family::laplace:
      return 3.0;
    case Family::normal_mixture: {
      const double g2 = dist.p1 * dist.p1, eps = dist.p2;
      const double denom = eps * g2 + 1.0 - eps;
      return 3.0 * eps * (1.0 - eps) * (g2 - 1.0) * (g2 - 1.0) / (denom * denom);
    }
    case Family::student_t:
      return dist.p1 > 4.0 ? 6.0 / (dist.p1 - 4.0) : std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

bool has_finite_variance(const DistributionSpec& dist) {
  return dist.family != Family::student_t || dist.p1 > 2.0;
}

double sample_innovation(const DistributionSpec& dist, std::mt19937_64& rng) {
  switch (dist.family) {
    case Family::normal:
      return dist.p1 + std::sqrt(dist.p2) * standard_normal(rng);
    case Family::laplace: {
      const double t = uniform01(rng) - 0.5;
      const double e = -std::log1p(-2.0 * std::abs(t));
      return dist.p1 + dist.p2 * (t < 0.0 ? -e : e);
    }
    case Family::normal_mixture: {
      const double u = uniform01(rng);
      const double z = standard_normal(rng);
      return u < dist.p2 ? dist.p1 * z : z;
    }
    case Family::student_t: {
      const double nu = dist.p1;
      const double z = standard_normal(rng);
      const double chi2 = 2.0 * gamma_draw(nu / 2.0, rng);
      return z / std::sqrt(chi2 / nu);
    }
  }
  return 0.0;
}

std::size_t SeriesSpec::change_index() const {
  return static_cast<std::size_t>(std::floor(theta * static_cast<double>(n)));
}

void SeriesSpec::validate() const {
  dist.validate();
  if (!(rho > -1.0 && rho < 1.0)) throw std::invalid_argument("rho must be in (-1,1)");
  if (n == 0) throw std::invalid_argument("n must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must be in (0,1)");
  if (!std::isfinite(mu)) throw std::invalid_argument("mu must be finite");
  if (lambda != 1.0) {
    const std::size_t cp = change_index();
    if (cp < 1 || cp > n - 1)
      throw std::invalid_argument("change index floor(theta*n) must lie in [1, n-1]");
  }
}

std::vector<double> sample_series(const SeriesSpec& spec, std::mt19937_64& rng) {
  spec.validate();
  const double rho = spec.rho;
  double y = sample_innovation(spec.dist, rng);
  if (has_finite_variance(spec.dist)) {
    y /= std::sqrt(1.0 - rho * rho);
  } else {
    for (int i = 0; i < 1000; ++i) y = rho * y + sample_innovation(spec.dist, rng);
  }
  const std::size_t cp = spec.change_index();
  std::vector<double> x(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    y = rho * y + sample_innovation(spec.dist, rng);
    x[i] = (i < cp ? y : spec.lambda * y) + spec.mu;
  }
  return x;
}

std::vector<double> sample_series(const SeriesSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  return sample_series(spec, rng);
}

}  // namespace scalecpt
