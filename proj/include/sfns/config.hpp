#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sfns/noise.hpp"

namespace sfns {

struct FouTableRow {
    double lambda = 1.0;
    double sigma = 1.0;
    double hurst = 0.5;
    double x0 = 0.0;
    double t = 1.0;
};

// Run configuration shared by all CLI commands. Unknown keys are rejected so
// that typos surface as config errors instead of silently falling back to
// defaults.
struct Config {
    double hurst = 0.5;
    bool alpha_auto = true;
    double alpha = 1.0;  // used when alpha_auto is false
    std::vector<double> epsilon_list = {0.4, 0.2, 0.1};
    double nu = 1.0;
    int grid_n = 64;
    double dt = 0.0;  // 0 -> dt_factor * eps for coupled runs
    double T = 1.0;
    std::uint64_t seed = 1;
    int samples = 0;
    std::vector<TrigModeSpec> noise;
    std::string output_dir = "out";

    double xi = 3.0;
    std::optional<double> p;  // variation exponent override
    std::optional<double> lambda_perp;
    int substeps = 1;
    double ergodic_horizon = 200.0;
    double ergodic_dt = 0.05;
    double sigma_threshold = 3.0;  // cross-method agreement gate, in std errors
    std::vector<FouTableRow> fou_table;

    double resolved_alpha() const;
    NoiseSpec make_noise_spec() const;
};

Config parse_config(const nlohmann::json& j);
Config load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const Config& c);

// FNV-1a 64 over the canonical serialization
std::string config_hash(const Config& c);

// manifest written next to every command's outputs
nlohmann::json make_manifest(const Config& c, const std::string& command,
                             const std::vector<std::string>& seed_plan);

inline constexpr const char* kVersionTag = "sfns 0.1.0";

}  // namespace sfns
