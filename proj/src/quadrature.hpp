#pragma once

// Internal quadrature helpers.  Adaptive Gauss-Kronrod for smooth integrands;
// tanh-sinh after the tangent substitution when the transformed integrand has
// integrable endpoint singularities (heavy-tailed t laws with nu < 1).

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>

namespace scalecpt::detail {

constexpr double kHalfPi = 1.570796326794896619231321691639751442;

template <class F>
double integrate_gk(F&& f, double a, double b, double tol = 1e-9) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 18, tol, &err);
}

// Integral of f over the whole real line via x = tan(u).
template <class F>
double integrate_line_gk(F&& f, double tol = 1e-9) {
  auto g = [&](double u) {
    const double x = std::tan(u);
    return f(x) * (1.0 + x * x);
  };
  return integrate_gk(g, -kHalfPi, kHalfPi, tol);
}

template <class F>
double integrate_halfline_gk(F&& f, double tol = 1e-9) {
  auto g = [&](double u) {
    const double x = std::tan(u);
    return f(x) * (1.0 + x * x);
  };
  return integrate_gk(g, 0.0, kHalfPi, tol);
}

// tanh-sinh over the tangent-substituted real line.  The substituted
// integrand is evaluated through the distance-to-endpoint argument so that
// |tan(u)| = cos(d)/sin(d) stays accurate arbitrarily close to +-pi/2.
template <class F>
double integrate_line_ts(F&& f, double tol = 1e-9) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto g = [&](double u, double d) {
    if (d < 1e-100) return 0.0;  // contribution is o(d) for integrable tails
    const double x = (u >= 0.0 ? 1.0 : -1.0) * (std::cos(d) / std::sin(d));
    return f(x) * (1.0 + x * x);
  };
  return integrator.integrate(g, -kHalfPi, kHalfPi, tol);
}

template <class F>
double integrate_halfline_ts(F&& f, double tol = 1e-9) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto g = [&](double u, double d) {
    if (u < kHalfPi / 2.0) {
      const double x = std::tan(u);
      return f(x) * (1.0 + x * x);
    }
    if (d < 1e-100) return 0.0;
    const double x = std::cos(d) / std::sin(d);
    return f(x) * (1.0 + x * x);
  };
  return integrator.integrate(g, 0.0, kHalfPi, tol);
}

// tanh-sinh on a finite interval (endpoint singularities allowed); the
// functor receives (x, distance to the nearest endpoint).
template <class F>
double integrate_ts2(F&& f, double a, double b, double tol = 1e-9) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, a, b, tol);
}

}  // namespace scalecpt::detail
