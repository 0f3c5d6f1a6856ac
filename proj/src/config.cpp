#include "sfns/config.hpp"

#include <fstream>
#include <set>

#include "sfns/errors.hpp"
#include "sfns/slowfast.hpp"

namespace sfns {

double Config::resolved_alpha() const { return resolve_alpha(alpha, hurst, alpha_auto); }

NoiseSpec Config::make_noise_spec() const {
    return make_trig_noise(grid_n, noise, xi, hurst, lambda_perp);
}

namespace {

[[noreturn]] void bad_field(const std::string& key, const std::string& why) {
    throw param_error("config field '" + key + "': " + why);
}

double get_number(const nlohmann::json& j, const std::string& key, double fallback,
                  bool required = false) {
    if (!j.contains(key)) {
        if (required) bad_field(key, "missing");
        return fallback;
    }
    if (!j.at(key).is_number()) bad_field(key, "expected a number");
    return j.at(key).get<double>();
}

void check_known_keys(const nlohmann::json& j, const std::set<std::string>& known,
                      const std::string& scope) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw param_error("config: unknown key '" + it.key() + "' in " + scope);
}

}  // namespace

Config parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw param_error("config: top level must be an object");
    check_known_keys(j,
                     {"hurst", "alpha", "epsilon_list", "nu", "grid_n", "dt", "T", "seed",
                      "samples", "noise", "output_dir", "xi", "p", "lambda_perp", "substeps",
                      "ergodic_horizon", "ergodic_dt", "sigma_threshold", "fou_table"},
                     "top level");
    Config c;
    c.hurst = get_number(j, "hurst", c.hurst);
    if (!(c.hurst > 0.25 && c.hurst < 1.0)) bad_field("hurst", "must lie in (1/4, 1)");

    if (j.contains("alpha")) {
        const auto& a = j.at("alpha");
        if (a.is_string()) {
            if (a.get<std::string>() != "auto") bad_field("alpha", "expected a number or \"auto\"");
            c.alpha_auto = true;
        } else if (a.is_number()) {
            c.alpha_auto = false;
            c.alpha = a.get<double>();
            if (!(c.alpha > 0.0)) bad_field("alpha", "must be positive");
        } else {
            bad_field("alpha", "expected a number or \"auto\"");
        }
    }

    if (j.contains("epsilon_list")) {
        if (!j.at("epsilon_list").is_array()) bad_field("epsilon_list", "expected an array");
        c.epsilon_list.clear();
        for (const auto& e : j.at("epsilon_list")) {
            if (!e.is_number()) bad_field("epsilon_list", "entries must be numbers");
            const double eps = e.get<double>();
            if (!(eps > 0.0 && eps <= 1.0)) bad_field("epsilon_list", "entries must be in (0,1]");
            c.epsilon_list.push_back(eps);
        }
    }

    c.nu = get_number(j, "nu", c.nu);
    if (!(c.nu > 0.0)) bad_field("nu", "must be positive");
    if (j.contains("grid_n")) {
        if (!j.at("grid_n").is_number_integer()) bad_field("grid_n", "expected an integer");
        c.grid_n = j.at("grid_n").get<int>();
        if (c.grid_n < 4 || c.grid_n % 2 != 0) bad_field("grid_n", "must be even and >= 4");
    }
    c.dt = get_number(j, "dt", c.dt);
    if (c.dt < 0.0) bad_field("dt", "must be nonnegative");
    c.T = get_number(j, "T", c.T);
    if (!(c.T >= 0.0)) bad_field("T", "must be nonnegative");
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
            bad_field("seed", "expected an integer");
        c.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("samples")) {
        if (!j.at("samples").is_number_integer()) bad_field("samples", "expected an integer");
        c.samples = j.at("samples").get<int>();
        if (c.samples < 0) bad_field("samples", "must be nonnegative");
    }

    if (j.contains("noise")) {
        if (!j.at("noise").is_array()) bad_field("noise", "expected an array");
        int row = 0;
        for (const auto& m : j.at("noise")) {
            const std::string scope = "noise[" + std::to_string(row) + "]";
            check_known_keys(m, {"k", "parity", "sigma", "lambda"}, scope);
            TrigModeSpec mode;
            if (!m.contains("k") || !m.at("k").is_array() || m.at("k").size() != 2)
                bad_field(scope + ".k", "expected [kx, ky]");
            mode.kx = m.at("k")[0].get<int>();
            mode.ky = m.at("k")[1].get<int>();
            const std::string parity = m.value("parity", std::string("sin"));
            if (parity == "sin")
                mode.parity = Parity::sin;
            else if (parity == "cos")
                mode.parity = Parity::cos;
            else
                bad_field(scope + ".parity", "expected \"sin\" or \"cos\"");
            mode.sigma = get_number(m, "sigma", 1.0);
            if (mode.sigma < 0.0) bad_field(scope + ".sigma", "must be nonnegative");
            mode.lambda = get_number(m, "lambda", -1.0);
            if (!(mode.lambda < 0.0)) bad_field(scope + ".lambda", "must be negative");
            c.noise.push_back(mode);
            ++row;
        }
    }

    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string()) bad_field("output_dir", "expected a string");
        c.output_dir = j.at("output_dir").get<std::string>();
    }
    c.xi = get_number(j, "xi", c.xi);
    if (j.contains("p")) {
        const double p = get_number(j, "p", 0.0);
        if (!(p >= 1.0 && p < 3.0)) bad_field("p", "must lie in [1, 3)");
        c.p = p;
    }
    if (j.contains("lambda_perp")) {
        const double lp = get_number(j, "lambda_perp", -1.0);
        if (!(lp < 0.0)) bad_field("lambda_perp", "must be negative");
        c.lambda_perp = lp;
    }
    if (j.contains("substeps")) {
        if (!j.at("substeps").is_number_integer()) bad_field("substeps", "expected an integer");
        c.substeps = j.at("substeps").get<int>();
        if (c.substeps < 1) bad_field("substeps", "must be >= 1");
    }
    c.ergodic_horizon = get_number(j, "ergodic_horizon", c.ergodic_horizon);
    if (!(c.ergodic_horizon > 0.0)) bad_field("ergodic_horizon", "must be positive");
    c.ergodic_dt = get_number(j, "ergodic_dt", c.ergodic_dt);
    if (!(c.ergodic_dt > 0.0)) bad_field("ergodic_dt", "must be positive");
    c.sigma_threshold = get_number(j, "sigma_threshold", c.sigma_threshold);
    if (!(c.sigma_threshold > 0.0)) bad_field("sigma_threshold", "must be positive");

    if (j.contains("fou_table")) {
        if (!j.at("fou_table").is_array()) bad_field("fou_table", "expected an array");
        int row = 0;
        for (const auto& r : j.at("fou_table")) {
            const std::string scope = "fou_table[" + std::to_string(row) + "]";
            check_known_keys(r, {"lambda", "sigma", "hurst", "x0", "t"}, scope);
            FouTableRow ft;
            ft.lambda = get_number(r, "lambda", 1.0);
            if (!(ft.lambda > 0.0)) bad_field(scope + ".lambda", "must be positive");
            ft.sigma = get_number(r, "sigma", 1.0);
            if (ft.sigma < 0.0) bad_field(scope + ".sigma", "must be nonnegative");
            ft.hurst = get_number(r, "hurst", 0.5);
            if (!(ft.hurst > 0.25 && ft.hurst < 1.0))
                bad_field(scope + ".hurst", "must lie in (1/4, 1)");
            ft.x0 = get_number(r, "x0", 0.0);
            ft.t = get_number(r, "t", 1.0);
            if (ft.t < 0.0) bad_field(scope + ".t", "must be nonnegative");
            c.fou_table.push_back(ft);
            ++row;
        }
    }
    return c;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw param_error("config: cannot open " + path.string());
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw param_error("config: JSON parse error at byte " + std::to_string(e.byte) + ": " +
                          e.what());
    }
    return parse_config(j);
}

nlohmann::json config_to_json(const Config& c) {
    nlohmann::json j;
    j["hurst"] = c.hurst;
    if (c.alpha_auto)
        j["alpha"] = "auto";
    else
        j["alpha"] = c.alpha;
    j["epsilon_list"] = c.epsilon_list;
    j["nu"] = c.nu;
    j["grid_n"] = c.grid_n;
    j["dt"] = c.dt;
    j["T"] = c.T;
    j["seed"] = c.seed;
    j["samples"] = c.samples;
    nlohmann::json noise = nlohmann::json::array();
    for (const auto& m : c.noise) {
        nlohmann::json mj;
        mj["k"] = {m.kx, m.ky};
        mj["parity"] = m.parity == Parity::sin ? "sin" : "cos";
        mj["sigma"] = m.sigma;
        mj["lambda"] = m.lambda;
        noise.push_back(std::move(mj));
    }
    j["noise"] = std::move(noise);
    j["output_dir"] = c.output_dir;
    j["xi"] = c.xi;
    if (c.p) j["p"] = *c.p;
    if (c.lambda_perp) j["lambda_perp"] = *c.lambda_perp;
    j["substeps"] = c.substeps;
    j["ergodic_horizon"] = c.ergodic_horizon;
    j["ergodic_dt"] = c.ergodic_dt;
    j["sigma_threshold"] = c.sigma_threshold;
    nlohmann::json table = nlohmann::json::array();
    for (const auto& r : c.fou_table) {
        nlohmann::json rj;
        rj["lambda"] = r.lambda;
        rj["sigma"] = r.sigma;
        rj["hurst"] = r.hurst;
        rj["x0"] = r.x0;
        rj["t"] = r.t;
        table.push_back(std::move(rj));
    }
    j["fou_table"] = std::move(table);
    return j;
}

std::string config_hash(const Config& c) {
    const std::string dump = config_to_json(c).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

nlohmann::json make_manifest(const Config& c, const std::string& command,
                             const std::vector<std::string>& seed_plan) {
    nlohmann::json j;
    j["command"] = command;
    j["config_hash"] = config_hash(c);
    j["seed"] = c.seed;
    j["seed_plan"] = seed_plan;
    j["version"] = kVersionTag;
    return j;
}

}  // namespace sfns
