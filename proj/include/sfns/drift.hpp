#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "sfns/noise.hpp"
#include "sfns/spectral.hpp"

namespace sfns {

// Mean self-advection of the small scales under the stationary law of the
// damped fractional field, pushed through (-C)^{-1}. The inverse acts on the
// span of the noise basis; drift mass outside that span cannot be inverted
// with a finite spec and is reported as `unresolved_mass` instead of being
// dropped silently.
struct DriftResult {
    SpectralField field;          // resolved drift, divergence-free, zero mean
    std::string method;           // "spectral" | "monte_carlo" | "ergodic"
    Eigen::VectorXd coeffs;       // coefficients of `field` in the noise basis
    Eigen::VectorXd coeff_stderr; // per-coefficient standard errors (zero if exact)
    double error_estimate = 0.0;  // Euclidean norm of coeff_stderr
    double unresolved_mass = 0.0; // L2 norm of the out-of-span component
};

// stationary variance of mode i:  sigma_i^2 Gamma(2H+1) / (2 |lambda_i|^{2H})
double stationary_mode_variance(const NoiseEntry& entry, double hurst);

// Closed form: sum_i sigma_bar_i^2 (-C)^{-1} b(e_i, e_i), deterministic.
DriftResult ito_stokes_drift_spectral(const NoiseSpec& spec);

// Monte Carlo over the stationary Gaussian law: draw r = sum_i g_i e_i with
// independent g_i ~ N(0, sigma_bar_i^2) and average (-C)^{-1} b(r, r).
DriftResult ito_stokes_drift_mc(const NoiseSpec& spec, int samples, std::uint64_t seed);

// Ergodic average along a unit-rate trajectory:
//   (1/T) int_0^T (-C)^{-1} b(w_s, w_s) ds,   dw = C w dt + dW^H, w(0)=0.
// Standard error from batch means.
DriftResult ito_stokes_drift_ergodic(const NoiseSpec& spec, double T, double dt,
                                     std::uint64_t seed, int substeps = 2, int batches = 20);

// L2 distance between two drift estimates (resolved fields).
double drift_distance(const DriftResult& a, const DriftResult& b);

}  // namespace sfns
