#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "sfns/config.hpp"
#include "sfns/errors.hpp"
#include "sfns/io.hpp"
#include "sfns/rng.hpp"

using namespace sfns;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const auto dir = fs::temp_directory_path() / "sfns_io_test";
    fs::create_directories(dir);
    return dir;
}

SpectralField sample_field(int n, std::uint64_t seed) {
    RngStream rng(seed, stream_id::generic, 0);
    SpectralField f(n);
    for (int kx = -3; kx <= 3; ++kx)
        for (int ky = -3; ky <= 3; ++ky) {
            if (kx < 0 || (kx == 0 && ky <= 0)) continue;
            for (int c = 0; c < 2; ++c) {
                const std::complex<double> z(rng.gaussian(), rng.gaussian());
                f.coef(c, kx, ky) = z;
                f.coef(c, -kx, -ky) = std::conj(z);
            }
        }
    return leray_project(f);
}

}  // namespace

TEST_CASE("field binary round trip is exact") {
    const auto dir = temp_dir();
    const SpectralField f = sample_field(16, 3);
    write_field(dir / "f.sfld", f);
    const SpectralField g = read_field(dir / "f.sfld");
    REQUIRE(g.n() == f.n());
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(f.data()[i] == g.data()[i]);
}

TEST_CASE("field json round trip is exact") {
    const SpectralField f = sample_field(8, 5);
    const SpectralField g = field_from_json(field_to_json(f));
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(f.data()[i] == g.data()[i]);
}

TEST_CASE("corrupt field file is rejected") {
    const auto dir = temp_dir();
    {
        std::ofstream os(dir / "bad.sfld", std::ios::binary);
        os << "NOPE";
    }
    CHECK_THROWS_AS(read_field(dir / "bad.sfld"), structural_error);
}

TEST_CASE("scalar path csv round trip") {
    const auto dir = temp_dir();
    ScalarPath p;
    p.times = {0.0, 0.1, 0.2, 0.30000000000000004};
    p.values = {0.0, -1.25, 3.7e-17, 2.0 / 3.0};
    write_scalar_path_csv(dir / "p.csv", p);
    const ScalarPath q = read_scalar_path_csv(dir / "p.csv");
    REQUIRE(q.times.size() == p.times.size());
    for (std::size_t i = 0; i < p.times.size(); ++i) {
        CHECK(q.times[i] == p.times[i]);
        CHECK(q.values[i] == p.values[i]);
    }
}

TEST_CASE("field path round trip") {
    const auto dir = temp_dir();
    FieldPath p;
    p.times = {0.0, 0.5, 1.0};
    p.values = {sample_field(8, 1), sample_field(8, 2), sample_field(8, 3)};
    write_field_path(dir / "traj.sfpt", p);
    const FieldPath q = read_field_path(dir / "traj.sfpt");
    REQUIRE(q.times.size() == 3);
    for (std::size_t t = 0; t < 3; ++t)
        for (std::size_t i = 0; i < p.values[t].size(); ++i)
            CHECK(p.values[t].data()[i] == q.values[t].data()[i]);
}

TEST_CASE("lift round trip preserves both levels") {
    const auto dir = temp_dir();
    const auto times = uniform_grid(1.0, 12);
    Eigen::MatrixXd c(13, 2);
    for (int i = 0; i <= 12; ++i) {
        c(i, 0) = std::sin(0.5 * i);
        c(i, 1) = 0.1 * i * i;
    }
    const auto lift = lift_canonical(times, c, 2.3);
    write_lift(dir / "lift.sfrl", lift);
    const auto back = read_lift(dir / "lift.sfrl");
    CHECK(back.p() == lift.p());
    CHECK((back.level1() - lift.level1()).norm() == 0.0);
    CHECK((back.level2(2, 9) - lift.level2(2, 9)).norm() < 1e-15);
    const auto j = lift_summary_json(back);
    CHECK(j.at("chen_max").get<double>() < 1e-12);
}

TEST_CASE("config parses, serializes and reparses to the same object") {
    const nlohmann::json j = {
        {"hurst", 0.7},
        {"alpha", "auto"},
        {"epsilon_list", {0.4, 0.2}},
        {"nu", 0.5},
        {"grid_n", 32},
        {"dt", 0.0},
        {"T", 1.0},
        {"seed", 99},
        {"samples", 1000},
        {"noise",
         {{{"k", {1, 0}}, {"parity", "sin"}, {"sigma", 1.0}, {"lambda", -1.0}},
          {{"k", {0, 1}}, {"parity", "cos"}, {"sigma", 0.5}, {"lambda", -2.0}}}},
        {"output_dir", "out"},
    };
    const Config a = parse_config(j);
    const Config b = parse_config(config_to_json(a));
    CHECK(config_to_json(a).dump() == config_to_json(b).dump());
    CHECK(config_hash(a) == config_hash(b));
    CHECK(a.resolved_alpha() == doctest::Approx(1.0));
    const auto spec = a.make_noise_spec();
    CHECK(spec.size() == 2);
}

TEST_CASE("config rejects malformed input with field diagnostics") {
    CHECK_THROWS_WITH_AS(parse_config({{"hurst", 1.5}}), doctest::Contains("hurst"), param_error);
    CHECK_THROWS_WITH_AS(parse_config({{"unknown_key", 1}}), doctest::Contains("unknown_key"),
                         param_error);
    CHECK_THROWS_WITH_AS(parse_config({{"alpha", true}}), doctest::Contains("alpha"), param_error);
    CHECK_THROWS_WITH_AS(parse_config({{"noise", {{{"k", {1}}}}}}), doctest::Contains("noise[0]"),
                         param_error);
    CHECK_THROWS_WITH_AS(parse_config({{"epsilon_list", {2.0}}}),
                         doctest::Contains("epsilon_list"), param_error);
}

TEST_CASE("manifest carries the hash, seed plan and version") {
    Config c;
    const auto m = make_manifest(c, "lift", {"noise: seed 1"});
    CHECK(m.at("command") == "lift");
    CHECK(m.at("config_hash").get<std::string>().size() == 16);
    CHECK(m.at("version") == kVersionTag);
    CHECK(m.at("seed_plan").size() == 1);
}

TEST_CASE("trajectory directory layout") {
    const auto dir = temp_dir() / "traj";
    fs::remove_all(dir);
    FieldPath p;
    p.times = {0.0, 0.5};
    p.values = {sample_field(8, 7), sample_field(8, 8)};
    std::vector<DiagRow> diag(2);
    diag[0].t = 0.0;
    diag[1].t = 0.5;
    write_trajectory(dir, p, diag);
    CHECK(fs::exists(dir / "snapshot_000000.sfld"));
    CHECK(fs::exists(dir / "snapshot_000001.sfld"));
    CHECK(fs::exists(dir / "diagnostics.csv"));
}

TEST_CASE("drift result serialization") {
    DriftResult d;
    d.method = "spectral";
    d.field = sample_field(8, 4);
    d.coeffs = Eigen::VectorXd::Zero(2);
    d.coeffs << 0.5, -0.25;
    d.coeff_stderr = Eigen::VectorXd::Zero(2);
    const auto j = drift_to_json(d);
    CHECK(j.at("method") == "spectral");
    CHECK(j.at("coeffs")[0].get<double>() == 0.5);
    CHECK(j.at("field_l2").get<double>() > 0.0);
}
