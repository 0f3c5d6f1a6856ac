#pragma once

#include "sfns/noise.hpp"
#include "sfns/paths.hpp"

namespace sfns {

// E[X_t^2] for the damped fractional process dX = -lambda X dt + sigma dB^H:
//   e^{-2 lambda t} x0^2
//   + sigma^2 H ( int_0^t e^{-lambda z} z^{2H-1} dz
//               + e^{-lambda t} int_0^t e^{-lambda (t-z)} z^{2H-1} dz ).
// The z^{2H-1} endpoint singularity (H < 1/2) is integrated analytically on
// the first panel via the exponential series; the smooth remainder uses
// adaptive Simpson. Relative accuracy ~1e-8.
double fou_second_moment(const FouParams& params, double t);

// Stationary variance  sigma^2 Gamma(2H+1) / (2 lambda^{2H}).
double limit_variance(const FouParams& params);

// |fou_second_moment(t) - limit_variance|
double mean_convergence_gap(const FouParams& params, double t);

// (1/T) int_0^T X_s^2 ds by the trapezoid rule on a uniform grid.
double time_average_quadratic(const ScalarPath& path);

// int_0^t e^{-lambda z} z^{2H-1} dz, exposed for diagnostics and tests of the
// quadrature itself.
double singular_exp_integral(double lambda, double hurst, double t);

}  // namespace sfns
