#include <cmath>

#include "doctest.h"
#include "sfns/drift.hpp"
#include "sfns/errors.hpp"
#include "sfns/fou_ergodics.hpp"

using namespace sfns;

namespace {

// Basis field mixing two wavenumber shells: its self-advection is nonzero,
// unlike any single-shell field (those are steady Euler flows in 2D).
SpectralField cross_shell_mode(int n) {
    SpectralField e = trig_mode(n, 1, 0, Parity::sin);
    e += trig_mode(n, 1, 1, Parity::cos);
    e *= 1.0 / std::sqrt(2.0);
    return e;
}

NoiseSpec composite_spec(int n, double hurst) {
    std::vector<NoiseEntry> entries;
    entries.push_back({0, cross_shell_mode(n), 1.0, -1.0});
    entries.push_back({1, trig_mode(n, 2, 1, Parity::sin), 0.8, -1.3});
    entries.push_back({2, trig_mode(n, 0, 1, Parity::cos), 0.6, -1.7});
    return NoiseSpec(std::move(entries), 3.0, hurst);
}

NoiseSpec shear_spec(int n, double hurst) {
    return make_trig_noise(n, {{1, 0, Parity::sin, 1.0, -1.0}}, 3.0, hurst);
}

}  // namespace

TEST_CASE("stationary mode variance matches the scalar limit") {
    NoiseEntry ent{0, trig_mode(16, 1, 0, Parity::sin), 0.7, -2.0};
    FouParams p{2.0, 0.7, 0.45, 0.0};
    CHECK(stationary_mode_variance(ent, 0.45) == doctest::Approx(limit_variance(p)));
}

TEST_CASE("shear noise has identically zero drift") {
    const auto spec = shear_spec(32, 0.4);
    const auto spectral = ito_stokes_drift_spectral(spec);
    CHECK(l2_norm(spectral.field) < 1e-13);
    CHECK(spectral.unresolved_mass < 1e-13);
    CHECK(spectral.error_estimate == 0.0);

    const auto mc = ito_stokes_drift_mc(spec, 200, 5);
    CHECK(l2_norm(mc.field) < 1e-13);

    const auto ergodic = ito_stokes_drift_ergodic(spec, 10.0, 0.05, 5);
    CHECK(l2_norm(ergodic.field) < 1e-12);
}

TEST_CASE("zero amplitude noise has zero drift") {
    auto spec = make_trig_noise(32, {{1, 0, Parity::sin, 0.0, -1.0}, {0, 1, Parity::cos, 0.0, -2.0}},
                                3.0, 0.45);
    CHECK(l2_norm(ito_stokes_drift_spectral(spec).field) == 0.0);
    CHECK(l2_norm(ito_stokes_drift_mc(spec, 1, 1).field) < 1e-15);
    CHECK(l2_norm(ito_stokes_drift_ergodic(spec, 5.0, 0.05, 1).field) < 1e-15);
}

TEST_CASE("composite spec has nonzero resolved drift") {
    const auto spec = composite_spec(32, 0.45);
    const auto spectral = ito_stokes_drift_spectral(spec);
    CHECK(l2_norm(spectral.field) > 1e-4);
    CHECK(divergence_defect(spectral.field) < 1e-10);
    CHECK(std::abs(mean_mode(spectral.field)) < 1e-13);
}

TEST_CASE("monte carlo drift agrees with the closed form" * doctest::timeout(300)) {
    const auto spec = composite_spec(32, 0.45);
    const auto spectral = ito_stokes_drift_spectral(spec);
    const auto mc = ito_stokes_drift_mc(spec, 20000, 11);
    for (Eigen::Index k = 0; k < spectral.coeffs.size(); ++k) {
        INFO("coefficient ", k);
        CHECK(std::abs(mc.coeffs[k] - spectral.coeffs[k]) <=
              3.0 * mc.coeff_stderr[k] + 1e-12);
    }
    CHECK(drift_distance(mc, spectral) <= 3.0 * mc.error_estimate + 1e-12);
}

TEST_CASE("single mode monte carlo reduces to the second moment identity") {
    std::vector<NoiseEntry> entries;
    entries.push_back({0, cross_shell_mode(32), 0.9, -1.4});
    const NoiseSpec spec(std::move(entries), 3.0, 0.4);
    const auto mc = ito_stokes_drift_mc(spec, 20000, 13);
    const auto spectral = ito_stokes_drift_spectral(spec);
    // E[g^2] (-C)^{-1} b(e,e) with E[g^2] the stationary variance
    CHECK(std::abs(mc.coeffs[0] - spectral.coeffs[0]) <= 3.0 * mc.coeff_stderr[0] + 1e-12);
}

TEST_CASE("ergodic drift agrees with the closed form" * doctest::timeout(300)) {
    const auto spec = composite_spec(32, 0.45);
    const auto spectral = ito_stokes_drift_spectral(spec);
    const auto ergodic = ito_stokes_drift_ergodic(spec, 100.0, 0.05, 17);
    for (Eigen::Index k = 0; k < spectral.coeffs.size(); ++k) {
        INFO("coefficient ", k, ": ergodic ", ergodic.coeffs[k], " spectral ",
             spectral.coeffs[k], " stderr ", ergodic.coeff_stderr[k]);
        CHECK(std::abs(ergodic.coeffs[k] - spectral.coeffs[k]) <=
              3.5 * ergodic.coeff_stderr[k] + 1e-10);
    }
}

TEST_CASE("unresolved drift mass is reported, not dropped") {
    // single composite mode: b(e,e) has content outside span{e}
    std::vector<NoiseEntry> entries;
    entries.push_back({0, cross_shell_mode(32), 1.0, -1.0});
    const NoiseSpec spec(std::move(entries), 3.0, 0.45);
    const auto spectral = ito_stokes_drift_spectral(spec);
    CHECK(spectral.unresolved_mass > 1e-4);
    // enlarging the basis with the target shell absorbs that mass
    const auto bigger = composite_spec(32, 0.45);
    const auto spectral_big = ito_stokes_drift_spectral(bigger);
    CHECK(spectral_big.unresolved_mass < spectral.unresolved_mass + 1e-12);
}

TEST_CASE("drift estimator argument validation") {
    const auto spec = shear_spec(16, 0.5);
    CHECK_THROWS_AS(ito_stokes_drift_mc(spec, 0, 1), param_error);
    CHECK_THROWS_AS(ito_stokes_drift_ergodic(spec, -1.0, 0.1, 1), param_error);
}
