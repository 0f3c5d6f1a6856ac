#pragma once

#include <cstdint>
#include <vector>

#include "sfns/noise.hpp"
#include "sfns/paths.hpp"
#include "sfns/spectral.hpp"

namespace sfns {

// alpha resolution: explicit value or the regime-selecting min(1, 1/2 + H)
double resolve_alpha(double alpha_or_auto, double hurst, bool is_auto);

struct SlowFastParams {
    double eps = 1.0;
    double hurst = 0.5;
    double alpha = 1.0;   // resolved value
    double nu = 1.0;      // > 0
    double dt_factor = 0.1;       // require dt <= dt_factor * eps
    double cfl_threshold = 6.28;  // reject when max|vel| * dt * n exceeds this
    int substeps = 1;             // refinement of the fast-noise quadrature

    void validate() const;
};

struct EnergyLedger {
    double sup_energy = 0.0;          // sup_t ||u||^2
    double enstrophy_integral = 0.0;  // 2 nu int ||grad u||^2 dt
    double sum = 0.0;                 // sup + integral
    double final_energy = 0.0;        // ||u(T)||^2
    double balance = 0.0;             // final_energy + enstrophy_integral
    double max_residual = 0.0;        // worst per-step energy balance defect
    double residual_sum = 0.0;        // accumulated |defect|; the scheme-error estimate
};

struct DiagRow {
    double t = 0.0;
    double energy_u = 0.0;       // ||u||^2
    double enstrophy_int = 0.0;  // running 2 nu int ||grad u||^2
    double energy_sum = 0.0;
    double div_defect = 0.0;
    double norm_w = 0.0;
    double norm_r_scaled = 0.0;  // sqrt(eps) ||r||
};

// Time integration of the coupled system
//   du = nu A u - b(u + v, u),                  v = eps^{H-alpha} w + r
//   dw = eps^{-1} C w dt + eps^{-H} dW^H
//   dr = eps^{-1} C r + nu A (eps^{H-alpha} w + r) - b(u + v, v)
// The fast component is sampled mode-wise up front (exact exponential update
// against the fBm increments) and enters the (u, r) equations as data; u and
// r advance with a Lawson-Heun step whose linear factors exp(nu A dt) and
// exp((eps^{-1} C + nu A) dt) are applied exactly in spectral space.
class SlowFastSim {
public:
    SlowFastSim(NoiseSpec spec, SlowFastParams params, SpectralField u0, SpectralField r0,
                double T, double dt, std::uint64_t seed, std::uint64_t replica = 0);

    void advance(int steps = 1);  // throws numerical_error on CFL rejection

    double t() const { return grid_[static_cast<std::size_t>(step_)]; }
    int step_index() const { return step_; }
    int total_steps() const { return static_cast<int>(grid_.size()) - 1; }
    double dt() const { return grid_[1] - grid_[0]; }

    const SpectralField& u() const { return u_; }
    const SpectralField& r() const { return r_; }
    SpectralField w() const;                 // assembled fast field at current time
    Eigen::VectorXd w_coeffs() const;        // fast-mode coefficients at current time
    const FastOuPaths& noise_paths() const { return noise_; }

    const EnergyLedger& energy() const { return energy_; }
    DiagRow diagnostics() const;

private:
    SpectralField apply_exp_cr(const SpectralField& f, double dt) const;
    SpectralField force_u(const SpectralField& u, const SpectralField& v) const;
    SpectralField force_r(const SpectralField& u, const SpectralField& wf,
                          const SpectralField& r) const;

    NoiseSpec spec_;
    SlowFastParams params_;
    std::vector<double> grid_;
    FastOuPaths noise_;
    std::vector<double> stokes_eig_;  // |k_i|^2 per noise mode
    SpectralField u_, r_;
    int step_ = 0;
    double scale_ = 1.0;  // eps^{H - alpha}
    EnergyLedger energy_;
};

struct SlowFastRunConfig {
    double T = 1.0;
    double dt = 0.0;          // 0 -> dt_factor * eps
    int output_every = 1;     // store every k-th step
};

struct SlowFastRunResult {
    FieldPath u_traj, w_traj, r_traj;
    std::vector<DiagRow> diag;
    EnergyLedger energy;
};

SlowFastRunResult run_slowfast(const NoiseSpec& spec, const SlowFastParams& params,
                               const SpectralField& u0, const SpectralField& r0,
                               const SlowFastRunConfig& run, std::uint64_t seed,
                               std::uint64_t replica = 0);

// Ledger over a sampled trajectory: sup ||u||^2, trapezoidal 2 nu int
// ||grad u||^2, their sum, and per-interval energy balance residuals.
EnergyLedger energy_report(const FieldPath& u_traj, double nu);

}  // namespace sfns
