#pragma once

#include <vector>

#include "sfns/paths.hpp"
#include "sfns/rough.hpp"
#include "sfns/slowfast.hpp"

namespace sfns {

// Deterministic solver for  du = nu A u - b(u + rbar, u)  (projection absorbs
// the pressure): Lawson-Heun with the exact heat factor.
FieldPath solve_drift_limit(const SpectralField& u0, const SpectralField& rbar, double nu,
                            double T, double dt, int output_every = 1,
                            double cfl_threshold = 6.28);

// One-step Davie update on the lift grid (coarsened by `stride`):
//   u_{t+h} = Pi[ u_t + h (nu A u_t - b(u_t, u_t))
//                 + urd_apply_1(lift, t, t+h, u_t)
//                 + urd_apply_2(lift, t, t+h, u_t) ].
// Level 2 is always retained. The caller orients the lift so that the
// additive terms implement the intended transport (see make_transport_lift).
FieldPath solve_transport_limit(const SpectralField& u0, const RoughLift& lift,
                                const NoiseSpec& spec, double nu, int stride = 1,
                                double blowup_factor = 50.0);

// Canonical lift of the integrated transport driver z with coefficients
//   z_i(t) = -sigma_i B^{H,i}_t / |lambda_i|,
// oriented so that +urd terms in the Davie step advect u by the limit noise
// (the prelimit nonlinearity enters with a minus sign).
RoughLift make_transport_lift(const NoiseSpec& spec, const std::vector<double>& times,
                              const Eigen::MatrixXd& wiener_coeffs, double p);

struct RemainderRow {
    double s = 0.0;
    double t = 0.0;
    double defect_hm3 = 0.0;    // H^{-3} norm of the local expansion defect
    double interval_length = 0.0;
};

struct RemainderReport {
    std::vector<RemainderRow> rows;          // all dyadic pairs
    std::vector<double> level_length;        // interval length per dyadic level
    std::vector<double> level_mean_defect;   // mean defect per level
    std::vector<double> level_variation;     // p/(N+1)-variation per level
    double dyadic_exponent = 0.0;            // log-log slope of mean defect vs length
    int levels = 0;
    int driver_levels = 2;                   // N used in the expansion
};

// Local expansion defect of a trajectory against the Davie form:
//   defect(s,t) = u_{s,t} - int_s^t (nu A u - b(u,u)) dr - sum_k A^k_{s,t} u_s
// with the drift integral by the trapezoid rule over all samples in [s,t]
// and N = rough_level_count(lift.p()) driver terms. Evaluated on dyadic
// pairs; the regression slope of mean defect against interval length is the
// remainder-regularity proxy.
RemainderReport remainder_defect(const FieldPath& traj, const RoughLift& lift,
                                 const NoiseSpec& spec, double nu, int max_levels = 6);

}  // namespace sfns
