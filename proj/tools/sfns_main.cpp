// Command-line front end: configuration ingestion, experiment orchestration
// (epsilon sweeps, Monte Carlo ensembles, regime selection) and CSV/JSON
// report emission.

#include <CLI11.hpp>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "json.hpp"
#include "sfns/config.hpp"
#include "sfns/drift.hpp"
#include "sfns/errors.hpp"
#include "sfns/fou_ergodics.hpp"
#include "sfns/io.hpp"
#include "sfns/limit_eq.hpp"
#include "sfns/noise.hpp"
#include "sfns/rough.hpp"
#include "sfns/slowfast.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sfns;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitThreshold = 4;

struct GlobalOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> out_override;
    int threads = 1;
    bool strict = false;
};

Config load(const GlobalOpts& g) {
    Config c = load_config(g.config_path);
    if (g.seed_override) c.seed = *g.seed_override;
    if (g.out_override) c.output_dir = *g.out_override;
    return c;
}

void write_manifest(const Config& c, const std::string& command,
                    const std::vector<std::string>& seed_plan) {
    fs::create_directories(c.output_dir);
    std::ofstream os(fs::path(c.output_dir) / "manifest.json");
    os << make_manifest(c, command, seed_plan).dump(2) << '\n';
}

// deterministic fan-out: results land by index regardless of schedule
void parallel_for(int count, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    for (int t = 0; t < std::min(threads, count); ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

double sim_dt(const Config& c, double eps_min) {
    const double auto_dt = 0.1 * eps_min;
    if (c.dt <= 0.0) return auto_dt;
    if (c.dt > auto_dt + 1e-15)
        throw param_error("dt must satisfy dt <= 0.1 * min(epsilon_list)");
    return c.dt;
}

SpectralField default_initial_field(int n) {
    // two-shell divergence-free initial datum with a nontrivial interaction
    SpectralField u0 = trig_mode(n, 1, 0, Parity::sin);
    u0 += trig_mode(n, 0, 1, Parity::sin);
    return u0;
}

int cmd_fou_stats(const Config& c) {
    std::vector<std::string> header = {"lambda", "sigma", "H", "t", "second_moment",
                                       "limit_variance", "gap"};
    const bool with_mc = c.samples > 0;
    if (with_mc) {
        header.push_back("mc_second_moment");
        header.push_back("mc_stderr");
    }
    std::vector<std::vector<double>> rows;
    std::vector<std::string> seed_plan;
    for (std::size_t row = 0; row < c.fou_table.size(); ++row) {
        const auto& r = c.fou_table[row];
        FouParams params{r.lambda, r.sigma, r.hurst, r.x0};
        const double m2 = fou_second_moment(params, r.t);
        const double lv = limit_variance(params);
        std::vector<double> out = {r.lambda, r.sigma, r.hurst, r.t, m2, lv, std::abs(m2 - lv)};
        if (with_mc) {
            const int steps = 32;
            const auto grid = uniform_grid(std::max(r.t, 1e-9), steps);
            double mean = 0.0, msq = 0.0;
            for (int s = 0; s < c.samples; ++s) {
                const auto path = sample_fou(params, grid, c.seed + row, 8,
                                             FbmOptions{});
                (void)s;
                const double x = path.values.back();
                const double x2 = x * x;
                const double delta = x2 - mean;
                mean += delta / (s + 1);
                msq += delta * (x2 - mean);
            }
            const double stderr_mc =
                c.samples > 1 ? std::sqrt(msq / (double(c.samples) * (c.samples - 1))) : 0.0;
            out.push_back(mean);
            out.push_back(stderr_mc);
            seed_plan.push_back("fou_table[" + std::to_string(row) + "]: seed " +
                                std::to_string(c.seed + row));
        }
        rows.push_back(std::move(out));
    }
    write_manifest(c, "fou-stats", seed_plan);
    write_csv(fs::path(c.output_dir) / "fou_stats.csv", header, rows);
    std::cout << "fou-stats: wrote " << rows.size() << " rows to " << c.output_dir << '\n';
    return kExitOk;
}

int cmd_drift(const Config& c, bool /*strict*/) {
    const NoiseSpec spec = c.make_noise_spec();
    const int samples = c.samples > 0 ? c.samples : 100000;
    const DriftResult spectral = ito_stokes_drift_spectral(spec);
    const DriftResult mc = ito_stokes_drift_mc(spec, samples, c.seed);
    const DriftResult ergodic = ito_stokes_drift_ergodic(spec, c.ergodic_horizon, c.ergodic_dt,
                                                         c.seed + 1, c.substeps);

    auto pair_gap = [&](const DriftResult& a, const DriftResult& b) {
        const double dist = drift_distance(a, b);
        const double err = std::hypot(a.error_estimate, b.error_estimate);
        json j;
        j["methods"] = {a.method, b.method};
        j["distance"] = dist;
        j["combined_stderr"] = err;
        j["within_threshold"] = dist <= c.sigma_threshold * std::max(err, 1e-15);
        return j;
    };

    json report;
    report["spectral"] = drift_to_json(spectral);
    report["monte_carlo"] = drift_to_json(mc);
    report["ergodic"] = drift_to_json(ergodic);
    report["pairs"] = {pair_gap(spectral, mc), pair_gap(spectral, ergodic), pair_gap(mc, ergodic)};
    bool ok = true;
    for (const auto& p : report["pairs"])
        if (!p.at("within_threshold").get<bool>()) ok = false;
    report["agreement"] = ok;

    write_manifest(c, "drift",
                   {"mc: seed " + std::to_string(c.seed),
                    "ergodic: seed " + std::to_string(c.seed + 1)});
    std::ofstream os(fs::path(c.output_dir) / "drift.json");
    os << report.dump(2) << '\n';
    std::cout << "drift: agreement=" << (ok ? "yes" : "NO") << ", report in " << c.output_dir
              << '\n';
    return ok ? kExitOk : kExitThreshold;
}

int cmd_lift(const Config& c, int threads, bool strict) {
    const NoiseSpec spec = c.make_noise_spec();
    const double alpha = c.resolved_alpha();
    const double p = c.p ? *c.p : default_p(c.hurst);
    if (c.epsilon_list.empty()) throw param_error("lift: epsilon_list must not be empty");
    const double eps_min = *std::min_element(c.epsilon_list.begin(), c.epsilon_list.end());
    const double dt = sim_dt(c, eps_min);
    const int steps = static_cast<int>(std::llround(c.T / dt));
    const auto grid = uniform_grid(c.T, steps);

    const int count = static_cast<int>(c.epsilon_list.size());
    std::vector<std::vector<double>> rows(count);
    parallel_for(count, threads, [&](int i) {
        const double eps = c.epsilon_list[static_cast<std::size_t>(i)];
        const FastOuPaths paths = sample_fast_ou_paths(spec, eps, grid, c.seed, c.substeps);
        const Eigen::MatrixXd y = build_y_coeffs(paths.w_coeffs, grid, eps, alpha, c.hurst);
        const RoughLift lift = lift_canonical(grid, y, p);

        // limit object: the damped-inverse Wiener path (vanishes in the
        // multiscale regime alpha = 1/2 + H)
        Eigen::MatrixXd zcoeffs = Eigen::MatrixXd::Zero(paths.wiener_coeffs.rows(),
                                                        paths.wiener_coeffs.cols());
        if (std::abs(alpha - 1.0) < 1e-12) {
            zcoeffs = paths.wiener_coeffs;
            for (std::size_t m = 0; m < spec.size(); ++m)
                zcoeffs.col(static_cast<Eigen::Index>(m)) /=
                    std::abs(spec.entries()[m].lambda);
        }
        const RoughLift limit = lift_canonical(grid, zcoeffs, p);
        const auto [d1, d2] = lift_distance(lift, limit);
        const auto norms = lift_variation_norms(lift);
        const double chen = lift_summary_json(lift).at("chen_max").get<double>();
        rows[static_cast<std::size_t>(i)] = {eps, d1, d2, chen, norms.first, norms.second};
    });

    write_manifest(c, "lift", {"noise: seed " + std::to_string(c.seed)});
    write_csv(fs::path(c.output_dir) / "lift.csv",
              {"epsilon", "d1", "d2", "chen_max", "pvar_level1", "pvar_level2"}, rows);

    bool monotone = true;
    for (int i = 0; i + 1 < count; ++i) {
        const bool sorted_desc = rows[static_cast<std::size_t>(i)][0] >
                                 rows[static_cast<std::size_t>(i) + 1][0];
        if (sorted_desc && rows[static_cast<std::size_t>(i) + 1][1] >=
                               rows[static_cast<std::size_t>(i)][1])
            monotone = false;
    }
    std::cout << "lift: wrote " << count << " rows to " << c.output_dir
              << (count > 1 ? (monotone ? " (d1 decreasing)" : " (d1 NOT decreasing)") : "")
              << '\n';
    if (strict && count > 1 && std::abs(alpha - 1.0) < 1e-12 && !monotone)
        return kExitThreshold;
    return kExitOk;
}

int cmd_simulate(const Config& c, int threads, bool strict) {
    const NoiseSpec spec = c.make_noise_spec();
    const double alpha = c.resolved_alpha();
    if (c.epsilon_list.empty()) throw param_error("simulate: epsilon_list must not be empty");
    const double eps_min = *std::min_element(c.epsilon_list.begin(), c.epsilon_list.end());
    const double dt = sim_dt(c, eps_min);
    const SpectralField u0 = default_initial_field(c.grid_n);
    const SpectralField r0(c.grid_n);

    const int count = static_cast<int>(c.epsilon_list.size());
    std::vector<json> summaries(count);
    std::atomic<bool> energy_ok{true};
    parallel_for(count, threads, [&](int i) {
        const double eps = c.epsilon_list[static_cast<std::size_t>(i)];
        SlowFastParams params;
        params.eps = eps;
        params.hurst = c.hurst;
        params.alpha = alpha;
        params.nu = c.nu;
        params.substeps = c.substeps;
        SlowFastRunConfig run;
        run.T = c.T;
        run.dt = dt;
        const auto res = run_slowfast(spec, params, u0, r0, run, c.seed);
        const fs::path dir = fs::path(c.output_dir) /
                             ("eps_" + format_double(eps));
        write_trajectory(dir, res.u_traj, res.diag);
        const double budget =
            2.0 * std::pow(l2_norm(u0), 2) * (1.0 + 10.0 * res.energy.residual_sum) + 1e-12;
        if (res.energy.sum > budget) energy_ok = false;
        json s;
        s["epsilon"] = eps;
        s["sup_energy"] = res.energy.sup_energy;
        s["enstrophy_integral"] = res.energy.enstrophy_integral;
        s["energy_sum"] = res.energy.sum;
        s["energy_budget"] = budget;
        s["max_divergence_defect"] = [&] {
            double worst = 0.0;
            for (const auto& d : res.diag) worst = std::max(worst, d.div_defect);
            return worst;
        }();
        summaries[static_cast<std::size_t>(i)] = std::move(s);
    });

    write_manifest(c, "simulate", {"noise: seed " + std::to_string(c.seed)});
    json top;
    top["runs"] = summaries;
    top["energy_inequality_ok"] = energy_ok.load();
    std::ofstream os(fs::path(c.output_dir) / "simulate.json");
    os << top.dump(2) << '\n';
    std::cout << "simulate: " << count << " runs, energy inequality "
              << (energy_ok ? "ok" : "VIOLATED") << '\n';
    if (!energy_ok && strict) return kExitThreshold;
    return kExitOk;
}

int cmd_compare(const Config& c, int threads, bool strict) {
    const NoiseSpec spec = c.make_noise_spec();
    const double alpha = c.resolved_alpha();
    if (c.epsilon_list.empty()) throw param_error("compare: epsilon_list must not be empty");
    const double eps_min = *std::min_element(c.epsilon_list.begin(), c.epsilon_list.end());
    const double dt = sim_dt(c, eps_min);
    const int steps = static_cast<int>(std::llround(c.T / dt));
    const auto grid = uniform_grid(c.T, steps);
    const double p = c.p ? *c.p : default_p(c.hurst);
    const SpectralField u0 = default_initial_field(c.grid_n);
    const SpectralField r0(c.grid_n);
    const bool drift_regime = c.hurst < 0.5;

    // limit trajectory is epsilon-independent; compute once on the shared grid
    SpectralField u_limit_T(c.grid_n);
    if (drift_regime) {
        const DriftResult rbar = ito_stokes_drift_spectral(spec);
        const FieldPath lim = solve_drift_limit(u0, rbar.field, c.nu, c.T, dt, steps);
        u_limit_T = lim.values.back();
    } else {
        // shared-noise Wiener path drives the transport limit
        const FastOuPaths probe = sample_fast_ou_paths(spec, eps_min, grid, c.seed, c.substeps);
        const RoughLift lift = make_transport_lift(spec, grid, probe.wiener_coeffs, p);
        const FieldPath lim = solve_transport_limit(u0, lift, spec, c.nu);
        u_limit_T = lim.values.back();
    }

    const int count = static_cast<int>(c.epsilon_list.size());
    std::vector<std::vector<double>> rows(count);
    parallel_for(count, threads, [&](int i) {
        const double eps = c.epsilon_list[static_cast<std::size_t>(i)];
        SlowFastParams params;
        params.eps = eps;
        params.hurst = c.hurst;
        params.alpha = alpha;
        params.nu = c.nu;
        params.substeps = c.substeps;
        SlowFastSim sim(spec, params, u0, r0, c.T, dt, c.seed);
        sim.advance(sim.total_steps());
        const double dist = l2_norm(sim.u() - u_limit_T);
        rows[static_cast<std::size_t>(i)] = {eps, dist, sim.energy().sum,
                                             sim.energy().sup_energy};
    });

    write_manifest(c, "compare", {"noise: seed " + std::to_string(c.seed)});
    write_csv(fs::path(c.output_dir) / "compare.csv",
              {"epsilon", "L2_distance_at_T", "energy_sum", "sup_energy"}, rows);

    bool monotone = true;
    for (int i = 0; i + 1 < count; ++i)
        if (rows[static_cast<std::size_t>(i)][0] > rows[static_cast<std::size_t>(i) + 1][0] &&
            rows[static_cast<std::size_t>(i) + 1][1] >= rows[static_cast<std::size_t>(i)][1])
            monotone = false;
    std::cout << "compare: wrote " << count << " rows; distance "
              << (monotone ? "decreasing" : "NOT decreasing") << " ("
              << (drift_regime ? "drift" : "transport") << " limit)\n";
    if (strict && count > 1 && !monotone) return kExitThreshold;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slow-fast spectral fluid toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "JSON run configuration")->required();
    std::uint64_t seed_val = 0;
    auto* seed_opt = app.add_option("--seed", seed_val, "override the config seed");
    std::string out_val;
    auto* out_opt = app.add_option("--out", out_val, "override the output directory");
    app.add_option("--threads", g.threads, "worker threads for sweeps")->check(CLI::Range(1, 256));
    app.add_flag("--strict", g.strict, "treat threshold breaches as errors");

    auto* fou = app.add_subcommand("fou-stats", "closed-form vs sampled second moments");
    auto* drift = app.add_subcommand("drift", "three-way drift estimation");
    auto* lift = app.add_subcommand("lift", "lift convergence diagnostics over epsilon");
    auto* simulate = app.add_subcommand("simulate", "coupled slow-fast runs");
    auto* compare = app.add_subcommand("compare", "prelimit vs limit over epsilon");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*seed_opt) g.seed_override = seed_val;
        if (*out_opt) g.out_override = out_val;
        const Config c = load(g);
        if (fou->parsed()) return cmd_fou_stats(c);
        if (drift->parsed()) return cmd_drift(c, g.strict);
        if (lift->parsed()) return cmd_lift(c, g.threads, g.strict);
        if (simulate->parsed()) return cmd_simulate(c, g.threads, g.strict);
        if (compare->parsed()) return cmd_compare(c, g.threads, g.strict);
        return kExitConfig;
    } catch (const param_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const structural_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const size_error& e) {
        std::cerr << "size error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
