#include <cmath>

#include "doctest.h"
#include "sfns/errors.hpp"
#include "sfns/slowfast.hpp"

using namespace sfns;

namespace {

NoiseSpec two_mode_spec(int n, double hurst, double sigma = 1.0) {
    return make_trig_noise(
        n, {{1, 0, Parity::sin, sigma, -1.0}, {0, 1, Parity::sin, 0.7 * sigma, -1.5}}, 3.0,
        hurst);
}

SlowFastParams base_params(double eps, double hurst, double alpha, double nu) {
    SlowFastParams p;
    p.eps = eps;
    p.hurst = hurst;
    p.alpha = alpha;
    p.nu = nu;
    return p;
}

}  // namespace

TEST_CASE("alpha resolution") {
    CHECK(resolve_alpha(0.0, 0.4, true) == doctest::Approx(0.9));
    CHECK(resolve_alpha(0.0, 0.7, true) == doctest::Approx(1.0));
    CHECK(resolve_alpha(0.8, 0.7, false) == doctest::Approx(0.8));
}

TEST_CASE("single stokes mode decays exactly under zero noise") {
    const int n = 16;
    const auto spec = two_mode_spec(n, 0.5, 0.0);  // sigma = 0: w stays zero
    const double nu = 0.7;
    SpectralField u0 = trig_mode(n, 1, 0, Parity::sin);
    SlowFastSim sim(spec, base_params(1.0, 0.5, 1.0, nu), u0, SpectralField(n), 1.0, 0.1, 1);
    sim.advance(sim.total_steps());
    SpectralField want = u0;
    want *= std::exp(-nu * 1.0);  // |k|^2 = 1
    CHECK(l2_norm(sim.u() - want) < 1e-12);
    CHECK(l2_norm(sim.w()) == 0.0);
}

TEST_CASE("remainder decays at the fast rate under zero noise") {
    const int n = 16;
    const double eps = 0.2, nu = 0.3;
    const auto spec = two_mode_spec(n, 0.5, 0.0);
    SpectralField r0 = spec.entries()[0].e;  // lambda = -1, |k|^2 = 1
    SlowFastSim sim(spec, base_params(eps, 0.5, 1.0, nu), SpectralField(n), r0, 0.1, 0.01, 2);
    sim.advance(sim.total_steps());
    SpectralField want = r0;
    want *= std::exp((-1.0 / eps - nu) * 0.1);
    CHECK(l2_norm(sim.r() - want) < 1e-12);
}

TEST_CASE("coupled fast component is bit identical to the standalone sampler") {
    const int n = 16;
    const auto spec = two_mode_spec(n, 0.6);
    const double eps = 0.3;
    const auto grid = uniform_grid(0.5, 25);
    SlowFastParams params = base_params(eps, 0.6, 1.0, 1.0);
    SpectralField u0 = trig_mode(n, 1, 1, Parity::sin);
    SlowFastSim sim(spec, params, u0, SpectralField(n), 0.5, 0.02, 123);
    const auto direct = sample_fast_ou_paths(spec, eps, grid, 123, params.substeps);
    sim.advance(sim.total_steps());
    for (Eigen::Index i = 0; i < direct.w_coeffs.rows(); ++i)
        for (Eigen::Index m = 0; m < direct.w_coeffs.cols(); ++m)
            CHECK(sim.noise_paths().w_coeffs(i, m) == direct.w_coeffs(i, m));
}

TEST_CASE("chunked advance matches a single run bit for bit") {
    const int n = 16;
    const auto spec = two_mode_spec(n, 0.45);
    SlowFastParams params = base_params(0.5, 0.45, 0.95, 0.8);
    SpectralField u0 = trig_mode(n, 1, 0, Parity::sin);
    u0 += trig_mode(n, 0, 1, Parity::sin);
    SlowFastSim whole(spec, params, u0, SpectralField(n), 1.0, 0.05, 77);
    SlowFastSim chunked(spec, params, u0, SpectralField(n), 1.0, 0.05, 77);
    whole.advance(whole.total_steps());
    chunked.advance(7);
    chunked.advance(5);
    chunked.advance(chunked.total_steps() - chunked.step_index());
    for (std::size_t i = 0; i < whole.u().size(); ++i) {
        CHECK(whole.u().data()[i] == chunked.u().data()[i]);
        CHECK(whole.r().data()[i] == chunked.r().data()[i]);
    }
}

TEST_CASE("energy inequality and divergence control on a noisy run") {
    const int n = 32;
    const auto spec = two_mode_spec(n, 0.6);
    SlowFastParams params = base_params(0.25, 0.6, 1.0, 1.0);
    SpectralField u0 = trig_mode(n, 1, 0, Parity::sin);
    u0 += trig_mode(n, 0, 1, Parity::sin);
    SlowFastRunConfig run;
    run.T = 1.0;
    run.output_every = 5;
    const auto res = run_slowfast(spec, params, u0, SpectralField(n), run, 5);
    const double budget = 2.0 * std::pow(l2_norm(u0), 2) * (1.0 + 10.0 * res.energy.residual_sum);
    CHECK(res.energy.sum <= budget + 1e-12);
    for (const auto& d : res.diag) CHECK(d.div_defect < 1e-10);
    // the same inequality holds at eps = 1 with the same seed
    SlowFastParams p1 = params;
    p1.eps = 1.0;
    SlowFastRunConfig run1 = run;
    run1.dt = 0.05;
    const auto res1 = run_slowfast(spec, p1, u0, SpectralField(n), run1, 5);
    const double budget1 =
        2.0 * std::pow(l2_norm(u0), 2) * (1.0 + 10.0 * res1.energy.residual_sum);
    CHECK(res1.energy.sum <= budget1 + 1e-12);
}

TEST_CASE("scheme convergence order on a smooth deterministic run") {
    const int n = 32;
    const auto spec = two_mode_spec(n, 0.5, 0.0);
    const double nu = 0.4;
    SpectralField u0 = trig_mode(n, 1, 0, Parity::sin);
    u0 += trig_mode(n, 0, 1, Parity::sin);
    u0 += trig_mode(n, 1, 1, Parity::cos);
    auto solve = [&](double dt) {
        SlowFastSim sim(spec, base_params(1.0, 0.5, 1.0, nu), u0, SpectralField(n), 0.5, dt, 1);
        sim.advance(sim.total_steps());
        return sim.u();
    };
    const auto u1 = solve(0.05);
    const auto u2 = solve(0.025);
    const auto u3 = solve(0.0125);
    const double e1 = l2_norm(u1 - u2);
    const double e2 = l2_norm(u2 - u3);
    const double order = std::log2(e1 / e2);
    INFO("observed order ", order);
    CHECK(order >= 1.7);
}

TEST_CASE("cfl violation is rejected with a suggestion") {
    const int n = 32;
    const auto spec = two_mode_spec(n, 0.5, 0.0);
    SpectralField u0 = trig_mode(n, 1, 0, Parity::sin);
    u0 *= 500.0;
    SlowFastSim sim(spec, base_params(1.0, 0.5, 1.0, 0.1), u0, SpectralField(n), 1.0, 0.1, 1);
    CHECK_THROWS_AS(sim.advance(), numerical_error);
}

TEST_CASE("dt must resolve the fast scale") {
    const int n = 16;
    const auto spec = two_mode_spec(n, 0.5);
    CHECK_THROWS_AS(SlowFastSim(spec, base_params(0.1, 0.5, 1.0, 1.0), SpectralField(n),
                                SpectralField(n), 1.0, 0.1, 1),
                    param_error);
}

TEST_CASE("zero horizon echoes the initial state") {
    const int n = 16;
    const auto spec = two_mode_spec(n, 0.5);
    SlowFastParams params = base_params(0.5, 0.5, 1.0, 1.0);
    SpectralField u0 = trig_mode(n, 1, 0, Parity::cos);
    SlowFastRunConfig run;
    run.T = 0.0;
    const auto res = run_slowfast(spec, params, u0, SpectralField(n), run, 9);
    REQUIRE(res.u_traj.values.size() == 1);
    CHECK(l2_norm(res.u_traj.values[0] - u0) < 1e-14);
}

TEST_CASE("energy report on reference trajectories") {
    const int n = 16;
    SUBCASE("constant zero trajectory") {
        FieldPath traj;
        traj.times = uniform_grid(1.0, 4);
        traj.values.assign(5, SpectralField(n));
        const auto led = energy_report(traj, 1.0);
        CHECK(led.sup_energy == 0.0);
        CHECK(led.enstrophy_integral == 0.0);
        CHECK(led.sum == 0.0);
    }
    SUBCASE("pure stokes decay balances the heat identity") {
        const double nu = 0.5;
        FieldPath traj;
        traj.times = uniform_grid(1.0, 1000);
        const SpectralField u0 = trig_mode(n, 1, 0, Parity::sin);
        for (double t : traj.times) {
            SpectralField u = u0;
            u *= std::exp(-nu * t);
            traj.values.push_back(u);
        }
        const auto led = energy_report(traj, nu);
        // ||u(T)||^2 + 2 nu int ||grad u||^2 = ||u0||^2
        CHECK(led.balance == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(led.sup_energy == doctest::Approx(1.0));
    }
    SUBCASE("needs at least two samples") {
        FieldPath traj;
        traj.times = {0.0};
        traj.values = {SpectralField(n)};
        CHECK_THROWS_AS(energy_report(traj, 1.0), structural_error);
    }
}

TEST_CASE("scaled remainder norm stays bounded along runs") {
    const int n = 32;
    const auto spec = two_mode_spec(n, 0.6);
    SpectralField u0 = trig_mode(n, 1, 0, Parity::sin);
    u0 += trig_mode(n, 0, 1, Parity::sin);
    for (double eps : {1.0, 0.25}) {
        SlowFastParams params = base_params(eps, 0.6, 1.0, 1.0);
        SlowFastRunConfig run;
        run.T = 1.0;
        run.dt = 0.02;
        run.output_every = 4;
        const auto res = run_slowfast(spec, params, u0, SpectralField(n), run, 21);
        for (const auto& d : res.diag) CHECK(d.norm_r_scaled < 10.0);
    }
}
