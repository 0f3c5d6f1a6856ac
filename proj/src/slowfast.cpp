#include "sfns/slowfast.hpp"

#include <cmath>
#include <string>

#include "sfns/errors.hpp"

namespace sfns {

double resolve_alpha(double alpha_or_auto, double hurst, bool is_auto) {
    if (is_auto) return std::min(1.0, 0.5 + hurst);
    if (!(alpha_or_auto > 0.0)) throw param_error("alpha must be positive");
    return alpha_or_auto;
}

void SlowFastParams::validate() const {
    if (!(eps > 0.0 && eps <= 1.0)) throw param_error("SlowFastParams: eps must be in (0,1]");
    if (!(nu > 0.0)) throw param_error("SlowFastParams: nu must be positive");
    if (!(hurst > 0.25 && hurst < 1.0))
        throw param_error("SlowFastParams: hurst must be in (1/4,1)");
    if (!(dt_factor > 0.0)) throw param_error("SlowFastParams: dt_factor must be positive");
    if (substeps < 1) throw param_error("SlowFastParams: substeps must be >= 1");
}

SlowFastSim::SlowFastSim(NoiseSpec spec, SlowFastParams params, SpectralField u0,
                         SpectralField r0, double T, double dt, std::uint64_t seed,
                         std::uint64_t replica)
    : spec_(std::move(spec)), params_(params) {
    params_.validate();
    if (!(dt > 0.0) || !(T > 0.0)) throw param_error("SlowFastSim: need T, dt > 0");
    if (dt > params_.dt_factor * params_.eps + 1e-15)
        throw param_error("SlowFastSim: dt must resolve the fast scale (dt <= " +
                          std::to_string(params_.dt_factor) + " * eps)");
    const int steps = static_cast<int>(std::llround(T / dt));
    if (steps < 1 || std::abs(steps * dt - T) > 1e-9 * T)
        throw param_error("SlowFastSim: T must be an integer multiple of dt");
    grid_ = uniform_grid(T, steps);
    noise_ = sample_fast_ou_paths(spec_, params_.eps, grid_, seed, params_.substeps, replica);
    scale_ = std::pow(params_.eps, params_.hurst - params_.alpha);

    // The exact integrating factor for eps^{-1} C + nu A needs the noise
    // basis fields to be Laplacian eigenfields (single |k| shell each).
    stokes_eig_.reserve(spec_.size());
    for (const auto& ent : spec_.entries()) {
        const SpectralField s = stokes_apply(ent.e);
        const double lam = inner_product(s, ent.e);
        SpectralField defect = s;
        axpy(-lam, ent.e, defect);
        if (l2_norm(defect) > 1e-10)
            throw param_error(
                "SlowFastSim: noise basis field " + std::to_string(ent.mode_id) +
                " is not a Laplacian eigenfield; the coupled stepper requires single-shell modes");
        stokes_eig_.push_back(-lam);
    }

    if (u0.n() != spec_.grid_n() && spec_.grid_n() > 0)
        throw structural_error("SlowFastSim: u0 grid does not match the noise grid");
    u_ = leray_project(u0);
    r_ = r0.empty() ? SpectralField(u_.n()) : leray_project(r0);
    energy_.sup_energy = std::pow(l2_norm(u_), 2);
    energy_.final_energy = energy_.sup_energy;
    energy_.balance = energy_.sup_energy;
    energy_.sum = energy_.sup_energy;
}

SpectralField SlowFastSim::w() const {
    if (spec_.size() == 0) return SpectralField(u_.n());
    return spec_.assemble(noise_.w_coeffs.row(step_).transpose());
}

Eigen::VectorXd SlowFastSim::w_coeffs() const {
    return noise_.w_coeffs.row(step_).transpose();
}

SpectralField SlowFastSim::apply_exp_cr(const SpectralField& f, double dt) const {
    // split into the noise span and its complement; both factors are diagonal
    SpectralField rest = f;
    SpectralField out(f.n());
    for (std::size_t i = 0; i < spec_.size(); ++i) {
        const auto& ent = spec_.entries()[i];
        const double c = inner_product(f, ent.e);
        axpy(-c, ent.e, rest);
        const double factor =
            std::exp((ent.lambda / params_.eps - params_.nu * stokes_eig_[i]) * dt);
        axpy(factor * c, ent.e, out);
    }
    heat_multiply(rest, params_.nu * dt);
    rest *= std::exp(spec_.lambda_perp() / params_.eps * dt);
    out += rest;
    return out;
}

SpectralField SlowFastSim::force_u(const SpectralField& u, const SpectralField& v) const {
    SpectralField adv = u;
    adv += v;
    SpectralField f = convection(adv, u);
    f *= -1.0;
    return f;
}

SpectralField SlowFastSim::force_r(const SpectralField& u, const SpectralField& wf,
                                   const SpectralField& r) const {
    // nu A (scale w) - b(u + scale w + r, scale w + r)
    SpectralField sw = wf;
    sw *= scale_;
    SpectralField v = sw;
    v += r;
    SpectralField adv = u;
    adv += v;
    SpectralField f = stokes_apply(sw);
    f *= params_.nu;
    f -= convection(adv, v);
    return f;
}

void SlowFastSim::advance(int steps) {
    for (int it = 0; it < steps; ++it) {
        if (step_ >= total_steps())
            throw param_error("SlowFastSim::advance: past the end of the horizon");
        const double h = dt();
        const int n = u_.n();

        SpectralField w0(n), w1(n);
        if (spec_.size() > 0) {
            w0 = spec_.assemble(noise_.w_coeffs.row(step_).transpose());
            w1 = spec_.assemble(noise_.w_coeffs.row(step_ + 1).transpose());
        }
        SpectralField v0 = w0;
        v0 *= scale_;
        v0 += r_;

        const double vmax = max_velocity(u_ + v0);
        if (vmax * h * n > params_.cfl_threshold) {
            const double suggested = 0.5 * params_.cfl_threshold / (vmax * n);
            throw numerical_error("SlowFastSim: CFL violation (max|vel| dt n = " +
                                  std::to_string(vmax * h * n) + "); suggested dt = " +
                                  std::to_string(suggested));
        }

        const double grad_u0 = sobolev_norm(u_, 1.0);
        const double energy_u0 = std::pow(l2_norm(u_), 2);

        // Lawson-Heun: k1 at t, predictor through the exact linear flow,
        // k2 at t+dt, trapezoidal combination.
        const SpectralField k1u = force_u(u_, v0);
        const SpectralField k1r = force_r(u_, w0, r_);

        SpectralField up = u_;
        axpy(h, k1u, up);
        heat_multiply(up, params_.nu * h);
        SpectralField rp = r_;
        axpy(h, k1r, rp);
        rp = apply_exp_cr(rp, h);

        SpectralField v1 = w1;
        v1 *= scale_;
        v1 += rp;
        const SpectralField k2u = force_u(up, v1);
        const SpectralField k2r = force_r(up, w1, rp);

        SpectralField unew = u_;
        axpy(0.5 * h, k1u, unew);
        heat_multiply(unew, params_.nu * h);
        axpy(0.5 * h, k2u, unew);
        SpectralField rnew = r_;
        axpy(0.5 * h, k1r, rnew);
        rnew = apply_exp_cr(rnew, h);
        axpy(0.5 * h, k2r, rnew);

        u_ = leray_project(unew);
        r_ = leray_project(rnew);
        ++step_;

        const double grad_u1 = sobolev_norm(u_, 1.0);
        const double energy_u1 = std::pow(l2_norm(u_), 2);
        const double diss = params_.nu * h * (grad_u0 * grad_u0 + grad_u1 * grad_u1);
        energy_.enstrophy_integral += diss;
        const double residual = 0.5 * (energy_u1 - energy_u0) + 0.5 * diss;
        energy_.max_residual = std::max(energy_.max_residual, std::abs(residual));
        energy_.residual_sum += std::abs(residual);
        energy_.sup_energy = std::max(energy_.sup_energy, energy_u1);
        energy_.final_energy = energy_u1;
        energy_.balance = energy_.final_energy + energy_.enstrophy_integral;
        energy_.sum = energy_.sup_energy + energy_.enstrophy_integral;
    }
}

DiagRow SlowFastSim::diagnostics() const {
    DiagRow row;
    row.t = t();
    row.energy_u = std::pow(l2_norm(u_), 2);
    row.enstrophy_int = energy_.enstrophy_integral;
    row.energy_sum = energy_.sup_energy + energy_.enstrophy_integral;
    row.div_defect = std::max(divergence_defect(u_), divergence_defect(r_));
    row.norm_w = spec_.size() > 0 ? noise_.w_coeffs.row(step_).norm() : 0.0;
    row.norm_r_scaled = std::sqrt(params_.eps) * l2_norm(r_);
    return row;
}

SlowFastRunResult run_slowfast(const NoiseSpec& spec, const SlowFastParams& params,
                               const SpectralField& u0, const SpectralField& r0,
                               const SlowFastRunConfig& run, std::uint64_t seed,
                               std::uint64_t replica) {
    SlowFastRunResult out;
    if (!(run.T > 0.0)) {  // T = 0: echo the initial state
        out.u_traj.times = {0.0};
        out.u_traj.values = {leray_project(u0)};
        out.w_traj.times = {0.0};
        out.w_traj.values = {SpectralField(u0.n())};
        out.r_traj.times = {0.0};
        out.r_traj.values = {r0.empty() ? SpectralField(u0.n()) : leray_project(r0)};
        return out;
    }
    const double dt = run.dt > 0.0 ? run.dt : params.dt_factor * params.eps;
    SlowFastSim sim(spec, params, u0, r0, run.T, dt, seed, replica);

    auto snapshot = [&]() {
        out.u_traj.times.push_back(sim.t());
        out.u_traj.values.push_back(sim.u());
        out.w_traj.times.push_back(sim.t());
        out.w_traj.values.push_back(sim.w());
        out.r_traj.times.push_back(sim.t());
        out.r_traj.values.push_back(sim.r());
        out.diag.push_back(sim.diagnostics());
    };
    snapshot();
    const int every = std::max(1, run.output_every);
    while (sim.step_index() < sim.total_steps()) {
        sim.advance(std::min(every, sim.total_steps() - sim.step_index()));
        snapshot();
    }
    out.energy = sim.energy();
    return out;
}

EnergyLedger energy_report(const FieldPath& u_traj, double nu) {
    u_traj.validate();
    if (u_traj.times.size() < 2)
        throw structural_error("energy_report: need at least two samples");
    EnergyLedger led;
    double prev_energy = std::pow(l2_norm(u_traj.values.front()), 2);
    double prev_grad = sobolev_norm(u_traj.values.front(), 1.0);
    led.sup_energy = prev_energy;
    for (std::size_t i = 1; i < u_traj.times.size(); ++i) {
        const double h = u_traj.times[i] - u_traj.times[i - 1];
        const double energy = std::pow(l2_norm(u_traj.values[i]), 2);
        const double grad = sobolev_norm(u_traj.values[i], 1.0);
        const double diss = nu * h * (prev_grad * prev_grad + grad * grad);
        led.enstrophy_integral += diss;
        const double residual = 0.5 * (energy - prev_energy) + 0.5 * diss;
        led.max_residual = std::max(led.max_residual, std::abs(residual));
        led.residual_sum += std::abs(residual);
        led.sup_energy = std::max(led.sup_energy, energy);
        prev_energy = energy;
        prev_grad = grad;
    }
    led.final_energy = prev_energy;
    led.balance = led.final_energy + led.enstrophy_integral;
    led.sum = led.sup_energy + led.enstrophy_integral;
    return led;
}

}  // namespace sfns
