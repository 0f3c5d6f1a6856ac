#include <cmath>
#include <complex>

#include "doctest.h"
#include "oracles.hpp"
#include "sfns/errors.hpp"
#include "sfns/rng.hpp"
#include "sfns/spectral.hpp"

using namespace sfns;

namespace {

// random divergence-free field supported on |k|_inf <= kmax
SpectralField random_field(int n, int kmax, RngStream& rng) {
    SpectralField f(n);
    for (int kx = -kmax; kx <= kmax; ++kx)
        for (int ky = -kmax; ky <= kmax; ++ky) {
            if (kx < 0 || (kx == 0 && ky <= 0)) continue;  // fill half lattice, mirror the rest
            for (int c = 0; c < 2; ++c) {
                const std::complex<double> z(rng.gaussian(), rng.gaussian());
                f.coef(c, kx, ky) = z;
                f.coef(c, -kx, -ky) = std::conj(z);
            }
        }
    return leray_project(f);
}

}  // namespace

TEST_CASE("leray projection kills pure gradients") {
    const int n = 16;
    SpectralField g(n);
    // gradient field: u_hat(k) = k * s(k)
    for (int kx : {1, 2, -3})
        for (int ky : {0, 1, 2}) {
            if (kx == 0 && ky == 0) continue;
            const std::complex<double> s(0.3 * kx, -0.1 * ky);
            g.coef(0, kx, ky) += double(kx) * s;
            g.coef(1, kx, ky) += double(ky) * s;
            g.coef(0, -kx, -ky) += double(kx) * std::conj(s) * -1.0;
            g.coef(1, -kx, -ky) += double(ky) * std::conj(s) * -1.0;
        }
    const SpectralField out = leray_project(g);
    CHECK(l2_norm(out) < 1e-13);
}

TEST_CASE("leray projection is the identity on divergence-free input") {
    RngStream rng(7, stream_id::generic, 0);
    const SpectralField f = random_field(16, 4, rng);
    const SpectralField g = leray_project(f);
    CHECK(l2_norm(g - f) < 1e-13 * l2_norm(f));
}

TEST_CASE("leray projection, hand value at k=(1,0)") {
    // u_hat((1,0)) = (1,1) -> (1,1) - (1,0)*1/1 = (0,1)
    const int n = 8;
    SpectralField f(n);
    f.coef(0, 1, 0) = 1.0;
    f.coef(1, 1, 0) = 1.0;
    f.coef(0, -1, 0) = 1.0;
    f.coef(1, -1, 0) = 1.0;
    const SpectralField out = leray_project(f);
    CHECK(std::abs(out.coef(0, 1, 0)) < 1e-15);
    CHECK(std::abs(out.coef(1, 1, 0) - std::complex<double>(1.0, 0.0)) < 1e-15);
}

TEST_CASE("leray projection zeroes the mean mode") {
    SpectralField f(8);
    f.coef(0, 0, 0) = 2.5;
    f.coef(1, 0, 0) = -1.0;
    const SpectralField out = leray_project(f);
    CHECK(std::abs(mean_mode(out)) == 0.0);
}

TEST_CASE("leray raw entry rejects wrong component count") {
    std::vector<std::complex<double>> buf(3 * 8 * 8);
    CHECK_THROWS_AS(leray_project_raw(8, 3, buf), structural_error);
}

TEST_CASE("leray projection idempotence and self-adjointness") {
    RngStream rng(11, stream_id::generic, 0);
    for (int rep = 0; rep < 20; ++rep) {
        SpectralField raw(16);
        for (int kx = -4; kx <= 4; ++kx)
            for (int ky = -4; ky <= 4; ++ky) {
                if (kx < 0 || (kx == 0 && ky <= 0)) continue;
                for (int c = 0; c < 2; ++c) {
                    const std::complex<double> z(rng.gaussian(), rng.gaussian());
                    raw.coef(c, kx, ky) = z;
                    raw.coef(c, -kx, -ky) = std::conj(z);
                }
            }
        const SpectralField once = leray_project(raw);
        const SpectralField twice = leray_project(once);
        CHECK(l2_norm(twice - once) < 1e-12 * std::max(1.0, l2_norm(once)));

        SpectralField raw2(16);
        for (int kx = -4; kx <= 4; ++kx)
            for (int ky = -4; ky <= 4; ++ky) {
                if (kx < 0 || (kx == 0 && ky <= 0)) continue;
                for (int c = 0; c < 2; ++c) {
                    const std::complex<double> z(rng.gaussian(), rng.gaussian());
                    raw2.coef(c, kx, ky) = z;
                    raw2.coef(c, -kx, -ky) = std::conj(z);
                }
            }
        const double lhs = inner_product(leray_project(raw), raw2);
        const double rhs = inner_product(raw, leray_project(raw2));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("stokes operator is the -|k|^2 multiplier") {
    const int n = 16;
    SUBCASE("zero field") {
        SpectralField z(n);
        CHECK(l2_norm(stokes_apply(z)) == 0.0);
    }
    SUBCASE("single mode |k|=1") {
        SpectralField f(n);
        f.coef(1, 1, 0) = 1.0;
        f.coef(1, -1, 0) = 1.0;
        const SpectralField out = stokes_apply(f);
        CHECK(std::abs(out.coef(1, 1, 0) - std::complex<double>(-1.0, 0.0)) < 1e-15);
    }
    SUBCASE("mode k=(2,1) scaled by -5") {
        SpectralField f(n);
        f.coef(0, 2, 1) = std::complex<double>(0.0, 3.0);
        const SpectralField out = stokes_apply(f);
        CHECK(std::abs(out.coef(0, 2, 1) - std::complex<double>(0.0, -15.0)) < 1e-14);
    }
}

TEST_CASE("stokes operator is symmetric negative") {
    RngStream rng(3, stream_id::generic, 0);
    const SpectralField u = random_field(16, 4, rng);
    const double quad = inner_product(stokes_apply(u), u);
    const double h1 = sobolev_norm(u, 1.0);
    CHECK(quad == doctest::Approx(-h1 * h1).epsilon(1e-12));
}

TEST_CASE("convection of a shear mode with itself vanishes") {
    // a sin(l.x) with a orthogonal to l transports itself nowhere
    for (auto [kx, ky] : {std::pair{1, 0}, std::pair{2, 1}, std::pair{0, 3}}) {
        const SpectralField e = trig_mode(32, kx, ky, Parity::sin);
        CHECK(l2_norm(convection(e, e)) < 1e-13);
        const SpectralField ec = trig_mode(32, kx, ky, Parity::cos);
        CHECK(l2_norm(convection(ec, ec)) < 1e-13);
    }
}

TEST_CASE("convection is bilinear with zero arguments") {
    RngStream rng(5, stream_id::generic, 0);
    const SpectralField v = random_field(32, 5, rng);
    SpectralField zero(32);
    CHECK(l2_norm(convection(zero, v)) == 0.0);
    CHECK(l2_norm(convection(v, zero)) == 0.0);
}

TEST_CASE("convection rejects grid mismatch") {
    SpectralField a(16), b(32);
    CHECK_THROWS_AS(convection(a, b), structural_error);
}

TEST_CASE("two-mode interaction against the direct convolution oracle") {
    const int n = 32;
    const SpectralField e1 = trig_mode(n, 1, 0, Parity::sin);
    const SpectralField e2 = trig_mode(n, 0, 1, Parity::sin);
    const SpectralField got = convection(e1, e2);
    const SpectralField want = oracle::convection_direct(e1, e2);
    CHECK(l2_norm(got - want) < 1e-12);
    // energy lands on the k=(1,+-1) diagonal
    double offdiag = 0.0;
    for (int c = 0; c < 2; ++c)
        for (int kx = -10; kx <= 10; ++kx)
            for (int ky = -10; ky <= 10; ++ky) {
                if (std::abs(kx) == 1 && std::abs(ky) == 1) continue;
                offdiag += std::norm(got.coef(c, kx, ky));
            }
    CHECK(offdiag < 1e-24);
    CHECK(l2_norm(got) > 1e-3);
}

TEST_CASE("dealiased convection matches the oracle on safely supported fields") {
    RngStream rng(13, stream_id::generic, 0);
    const int n = 36;
    const int support = n / 6;
    for (int rep = 0; rep < 5; ++rep) {
        const SpectralField u = random_field(n, support, rng);
        const SpectralField v = random_field(n, support, rng);
        const SpectralField got = convection(u, v);
        const SpectralField want = oracle::convection_direct(u, v);
        const double scale = l2_norm(want);
        CHECK(l2_norm(got - want) < 1e-10 * std::max(1.0, scale));
    }
}

TEST_CASE("energy cancellation <b(u,v),v> = 0") {
    RngStream rng(17, stream_id::generic, 0);
    for (int rep = 0; rep < 10; ++rep) {
        const SpectralField u = random_field(32, 6, rng);
        const SpectralField v = random_field(32, 6, rng);
        const double ip = inner_product(convection(u, v), v);
        const double bound = 1e-10 * l2_norm(u) * sobolev_norm(v, 1.0) * sobolev_norm(v, 1.0);
        CHECK(std::abs(ip) <= std::max(bound, 1e-14));
    }
}

TEST_CASE("iterated convection equals two sequential applications") {
    RngStream rng(19, stream_id::generic, 0);
    const SpectralField f1 = random_field(32, 4, rng);
    const SpectralField f2 = random_field(32, 4, rng);
    const SpectralField phi = random_field(32, 4, rng);
    const SpectralField a = convection2(f1, f2, phi);
    const SpectralField b = convection(f2, convection(f1, phi));
    CHECK(l2_norm(a - b) == 0.0);

    SUBCASE("shear pattern in the inner slot gives zero") {
        const SpectralField e = trig_mode(32, 2, 1, Parity::sin);
        CHECK(l2_norm(convection2(e, f2, e)) < 1e-13);
    }
    SUBCASE("single-mode triple against the oracle") {
        const SpectralField g1 = trig_mode(32, 1, 0, Parity::sin);
        const SpectralField g2 = trig_mode(32, 0, 1, Parity::cos);
        const SpectralField p = trig_mode(32, 1, 1, Parity::sin);
        const SpectralField got = convection2(g1, g2, p);
        const SpectralField want = oracle::convection_direct(g2, oracle::convection_direct(g1, p));
        CHECK(l2_norm(got - want) < 1e-12);
    }
}

TEST_CASE("sobolev norms") {
    const int n = 16;
    SUBCASE("zero field") { CHECK(sobolev_norm(SpectralField(n), 1.3) == 0.0); }
    SUBCASE("unit mode at |k|=1 has unit norm for every s") {
        const SpectralField e = trig_mode(n, 0, 1, Parity::cos);
        for (double s : {-3.0, 0.0, 0.5, 2.0}) CHECK(sobolev_norm(e, s) == doctest::Approx(1.0));
    }
    SUBCASE("mixed two-mode field, hand sum") {
        SpectralField f(n);
        f.coef(1, 1, 0) = 2.0;            // |k|^2 = 1
        f.coef(1, -1, 0) = 2.0;
        f.coef(0, 0, 2) = {0.0, 1.0};     // |k|^2 = 4
        f.coef(0, 0, -2) = {0.0, -1.0};
        const double s = 1.5;
        const double want = std::sqrt(2 * 4.0 * 1.0 + 2 * 1.0 * std::pow(4.0, s));
        CHECK(sobolev_norm(f, s) == doctest::Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("trig modes are orthonormal and divergence-free") {
    const int n = 32;
    std::vector<SpectralField> modes;
    modes.push_back(trig_mode(n, 1, 0, Parity::sin));
    modes.push_back(trig_mode(n, 1, 0, Parity::cos));
    modes.push_back(trig_mode(n, 0, 1, Parity::sin));
    modes.push_back(trig_mode(n, 2, 1, Parity::cos));
    for (std::size_t i = 0; i < modes.size(); ++i) {
        CHECK(l2_norm(modes[i]) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(divergence_defect(modes[i]) < 1e-13);
        CHECK(conjugate_symmetry_defect(modes[i]) < 1e-15);
        for (std::size_t j = i + 1; j < modes.size(); ++j)
            CHECK(std::abs(inner_product(modes[i], modes[j])) < 1e-13);
    }
}
