#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hpdro/model.hpp"
#include "hpdro/thermal.hpp"
#include "hpdro/uncertainty.hpp"

namespace hpdro::io {

inline constexpr const char* kToolVersion = "0.1.0";

struct SolverSettings {
    double gap = 0.01;
    double time_limit_s = 120.0;
    long node_limit = 0; ///< 0 = unlimited
};

/// File inputs of one experiment, all paths relative to the manifest's
/// own directory unless absolute.
struct ManifestPaths {
    std::string houses;
    std::string forecast;
    std::string price;
    std::string power_errors;
    std::string temp_errors;
};

struct ExperimentManifest {
    ManifestPaths files;
    int horizon = 0;
    double dt_hours = 0.0;
    std::string variant = "kdea-dro"; ///< deterministic|ga-dro|kdea-dro|ro
    double beta_power = 0.1;
    double beta_temp = 0.1;
    std::string radius_mode = "constant"; ///< constant|sqrt-t
    double bandwidth_power = 0.2;         ///< KDE bandwidth, kW
    double bandwidth_temp = 0.1;          ///< KDE bandwidth, °C
    double interval_coverage = 0.95;      ///< robust-variant interval mass
    SolverSettings solver;
    int trials = 200;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    double fine_dt_seconds = 5.0;
    bool cyclic_switching = false;
    bool symmetric_lower_margins = false;

    // resolved at load time, not part of the file schema
    std::string source_path;
    std::uint64_t content_hash = 0;

    void validate() const;
};

/// Strict loader: unknown keys anywhere in the document are rejected, so a
/// typo cannot silently fall back to a default.
ExperimentManifest load_manifest(const std::string& path);

/// Serialized form of the resolved manifest (seed and overrides applied),
/// including tool version and the source manifest hash.
std::string manifest_json(const ExperimentManifest& manifest);

struct HouseFile {
    std::vector<thermal::HouseSpec> houses;
    std::vector<model::ZoneSpec> zones;
};

/// Houses + zones from one JSON document with unit-suffixed keys
/// (R_degC_per_kW, C_kWh_per_degC, ...). Unknown keys are rejected.
HouseFile load_houses(const std::string& path);

/// Everything the pipeline consumes, parsed and cross-checked: house and
/// zone specs, forecasts of length `horizon`, and per-slot error histories.
struct ParsedExperiment {
    std::vector<thermal::HouseSpec> houses;
    std::vector<model::ZoneSpec> zones;
    model::ForecastSet forecast;
    std::vector<uncertainty::ErrorHistory> power_history; ///< one per slot
    std::vector<uncertainty::ErrorHistory> temp_history;  ///< one per slot
};

ParsedExperiment parse_configs(const ExperimentManifest& manifest);

} // namespace hpdro::io
