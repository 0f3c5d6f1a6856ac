#include "sfns/limit_eq.hpp"

#include <cmath>
#include <string>

#include "sfns/errors.hpp"

namespace sfns {

FieldPath solve_drift_limit(const SpectralField& u0, const SpectralField& rbar, double nu,
                            double T, double dt, int output_every, double cfl_threshold) {
    if (!(nu > 0.0)) throw param_error("solve_drift_limit: nu must be positive");
    if (!rbar.empty() && rbar.n() != u0.n())
        throw structural_error("solve_drift_limit: rbar grid mismatch");
    if (!rbar.empty() && divergence_defect(rbar) > 1e-8)
        throw param_error("solve_drift_limit: rbar must be divergence-free");
    FieldPath out;
    SpectralField u = leray_project(u0);
    out.times.push_back(0.0);
    out.values.push_back(u);
    if (!(T > 0.0)) return out;
    if (!(dt > 0.0)) throw param_error("solve_drift_limit: dt must be positive");
    const int steps = static_cast<int>(std::llround(T / dt));
    if (steps < 1 || std::abs(steps * dt - T) > 1e-9 * T)
        throw param_error("solve_drift_limit: T must be an integer multiple of dt");

    auto force = [&](const SpectralField& v) {
        SpectralField adv = v;
        if (!rbar.empty()) adv += rbar;
        SpectralField f = convection(adv, v);
        f *= -1.0;
        return f;
    };

    const int n = u.n();
    for (int j = 0; j < steps; ++j) {
        const double vmax = max_velocity(u);
        if (vmax * dt * n > cfl_threshold) {
            const double suggested = 0.5 * cfl_threshold / (std::max(vmax, 1e-12) * n);
            throw numerical_error("solve_drift_limit: CFL violation; suggested dt = " +
                                  std::to_string(suggested));
        }
        const SpectralField k1 = force(u);
        SpectralField up = u;
        axpy(dt, k1, up);
        heat_multiply(up, nu * dt);
        const SpectralField k2 = force(up);
        SpectralField unew = u;
        axpy(0.5 * dt, k1, unew);
        heat_multiply(unew, nu * dt);
        axpy(0.5 * dt, k2, unew);
        u = leray_project(unew);
        if ((j + 1) % std::max(1, output_every) == 0 || j + 1 == steps) {
            out.times.push_back((j + 1) * dt);
            out.values.push_back(u);
        }
    }
    return out;
}

FieldPath solve_transport_limit(const SpectralField& u0, const RoughLift& lift,
                                const NoiseSpec& spec, double nu, int stride,
                                double blowup_factor) {
    if (!(nu > 0.0)) throw param_error("solve_transport_limit: nu must be positive");
    if (stride < 1) throw param_error("solve_transport_limit: stride must be >= 1");
    if ((lift.points() - 1) % stride != 0)
        throw structural_error("solve_transport_limit: lift grid must refine the solver grid");
    FieldPath out;
    SpectralField u = leray_project(u0);
    const double u0_norm = l2_norm(u);
    out.times.push_back(lift.times().front());
    out.values.push_back(u);
    const auto& times = lift.times();
    for (int j = 0; j + stride <= static_cast<int>(times.size()) - 1; j += stride) {
        const double s = times[static_cast<std::size_t>(j)];
        const double t = times[static_cast<std::size_t>(j) + stride];
        const double h = t - s;
        SpectralField drift = stokes_apply(u);
        drift *= nu;
        drift -= convection(u, u);
        SpectralField unew = u;
        axpy(h, drift, unew);
        unew += urd_apply_1(lift, s, t, u, spec);
        unew += urd_apply_2(lift, s, t, u, spec);
        u = leray_project(unew);
        if (!(l2_norm(u) <= blowup_factor * (u0_norm + 1.0)))
            throw numerical_error("solve_transport_limit: norm blow-up at t = " +
                                  std::to_string(t));
        out.times.push_back(t);
        out.values.push_back(u);
    }
    return out;
}

RoughLift make_transport_lift(const NoiseSpec& spec, const std::vector<double>& times,
                              const Eigen::MatrixXd& wiener_coeffs, double p) {
    if (wiener_coeffs.rows() != static_cast<Eigen::Index>(times.size()))
        throw structural_error("make_transport_lift: times/coefficient length mismatch");
    if (wiener_coeffs.cols() != static_cast<Eigen::Index>(spec.size()))
        throw structural_error("make_transport_lift: mode count mismatch");
    Eigen::MatrixXd z = wiener_coeffs;
    for (std::size_t i = 0; i < spec.size(); ++i)
        z.col(static_cast<Eigen::Index>(i)) /= -std::abs(spec.entries()[i].lambda);
    return lift_canonical(times, z, p);
}

RemainderReport remainder_defect(const FieldPath& traj, const RoughLift& lift,
                                 const NoiseSpec& spec, double nu, int max_levels) {
    traj.validate();
    const int n = static_cast<int>(traj.times.size());
    if (n < 3) throw structural_error("remainder_defect: need at least three samples");
    if (lift.points() != n)
        throw structural_error("remainder_defect: trajectory and lift grids differ");
    for (int i = 0; i < n; ++i)
        if (std::abs(traj.times[static_cast<std::size_t>(i)] - lift.times()[static_cast<std::size_t>(i)]) > 1e-9)
            throw structural_error("remainder_defect: trajectory and lift grids differ");

    RemainderReport rep;
    rep.driver_levels = rough_level_count(lift.p());

    // drift integrand at every sample
    std::vector<SpectralField> f(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        SpectralField g = stokes_apply(traj.values[static_cast<std::size_t>(i)]);
        g *= nu;
        g -= convection(traj.values[static_cast<std::size_t>(i)],
                        traj.values[static_cast<std::size_t>(i)]);
        f[static_cast<std::size_t>(i)] = std::move(g);
    }

    const int intervals = n - 1;
    int levels = 0;
    while (levels + 1 <= max_levels && intervals % (1 << (levels + 1)) == 0 &&
           (intervals >> (levels + 1)) >= 1)
        ++levels;
    if (levels == 0) throw structural_error("remainder_defect: sample count has no dyadic split");
    rep.levels = levels;

    const double T = traj.times.back() - traj.times.front();
    const double pvar_exp = lift.p() / (rep.driver_levels + 1);
    for (int lvl = 1; lvl <= levels; ++lvl) {
        const int pieces = 1 << lvl;
        const int span = intervals / pieces;
        double mean = 0.0;
        double var_acc = 0.0;
        for (int b = 0; b < pieces; ++b) {
            const int i = b * span;
            const int j = i + span;
            // trapezoid of the drift over all samples in [t_i, t_j]
            SpectralField integral(traj.values.front().n());
            for (int q = i; q < j; ++q) {
                const double h = traj.times[static_cast<std::size_t>(q) + 1] -
                                 traj.times[static_cast<std::size_t>(q)];
                axpy(0.5 * h, f[static_cast<std::size_t>(q)], integral);
                axpy(0.5 * h, f[static_cast<std::size_t>(q) + 1], integral);
            }
            SpectralField defect = traj.values[static_cast<std::size_t>(j)];
            defect -= traj.values[static_cast<std::size_t>(i)];
            defect -= integral;
            const double s = traj.times[static_cast<std::size_t>(i)];
            const double t = traj.times[static_cast<std::size_t>(j)];
            defect -= urd_apply_1(lift, s, t, traj.values[static_cast<std::size_t>(i)], spec);
            if (rep.driver_levels >= 2)
                defect -= urd_apply_2(lift, s, t, traj.values[static_cast<std::size_t>(i)], spec);
            const double norm = sobolev_norm(defect, -3.0);
            rep.rows.push_back({s, t, norm, t - s});
            mean += norm;
            var_acc += std::pow(norm, pvar_exp);
        }
        rep.level_length.push_back(T / pieces);
        rep.level_mean_defect.push_back(mean / pieces);
        rep.level_variation.push_back(std::pow(var_acc, 1.0 / pvar_exp));
    }

    // least-squares slope of log(mean defect) against log(length)
    if (rep.level_length.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int k = static_cast<int>(rep.level_length.size());
        for (int i = 0; i < k; ++i) {
            const double x = std::log(rep.level_length[static_cast<std::size_t>(i)]);
            const double y = std::log(std::max(rep.level_mean_defect[static_cast<std::size_t>(i)], 1e-300));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        rep.dyadic_exponent = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    }
    return rep;
}

}  // namespace sfns
