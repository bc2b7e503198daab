#pragma once

// Experiment configuration documents (JSON).
//
//   {
//     "squeezing":    { "r1": 0.564, "r2_db": 5.1 },
//     "efficiencies": { "xi1_sq": 0.970, "xi2_sq": 0.950, "xi3_sq": 0.966,
//                       "xi4_sq": 0.968, "eta_sq": 0.90 },
//     "mirror_R": 0.98,
//     "gain": { "mode": "optimal" },          // or { "mode": "fixed", "value": 0.74 }
//     "enl_db": 11.3,                         // optional
//     "blocked": false                        // optional
//   }
//
// Efficiencies are intensity values (xi^2, eta^2) and are converted to
// amplitudes once, in to_params(). Squeezing per beam is given either as the
// parameter r or as a magnitude in dB below the SNL, never both.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cvswap/params.hpp"

namespace cvswap::config {

struct Squeezing {
    enum class Unit { r, db };
    Unit unit = Unit::r;
    double value = 0.0;

    double r() const;
    friend bool operator==(const Squeezing&, const Squeezing&) = default;
};

struct Config {
    Squeezing beam1;
    Squeezing beam2;
    ExperimentParams::Intensities efficiencies;
    double mirror_R = 0.98;
    GainSpec gain = GainSpec::optimal();
    std::optional<double> enl_db;
    std::optional<bool> blocked;

    /// Throws PhysicsError for out-of-domain values.
    ExperimentParams to_params() const;
};

/// Throws ConfigError (with offending key and 1-based line where known).
Config parse_config(std::string_view text);
Config load_config(const std::filesystem::path& path);

nlohmann::json to_json(const Config& config);
std::string serialize(const Config& config);

/// Structured echo of resolved parameters (amplitude and intensity values).
nlohmann::json params_to_json(const ExperimentParams& params);

}  // namespace cvswap::config
