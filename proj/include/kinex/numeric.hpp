#pragma once

#include <cstddef>
#include <functional>

namespace kinex::numeric {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t intervals = 0;
  std::size_t evaluations = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  std::size_t max_intervals = 4000;
};

// Globally adaptive 21-point Gauss-Kronrod quadrature on [a, b]. Stops when
// the summed error estimate is below max(abs_tol, rel_tol*|value|). Throws
// Error(Numeric) with the achieved estimate if max_intervals is exhausted.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {});

// Integral over [a, inf) via the map x = a + t/(1-t), t in [0, 1).
QuadratureResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                       const QuadratureOptions& options = {});

// Regularized lower incomplete gamma P(shape, x).
double regularized_gamma_p(double shape, double x);

// Upper complement Q(shape, x) = 1 - P(shape, x), accurate in the tail.
double regularized_gamma_q(double shape, double x);

// Regularized incomplete beta I_x(a, b).
double regularized_beta(double a, double b, double x);

// Student-t CDF with `dof` degrees of freedom, via the incomplete beta function.
double student_t_cdf(double t, double dof);

// P(|T| >= |t|) for T ~ Student-t(dof).
double student_t_two_sided_p(double t, double dof);

}  // namespace kinex::numeric
