#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hpdro/config.hpp"
#include "hpdro/csv.hpp"
#include "hpdro/errors.hpp"
#include "hpdro/rng.hpp"

namespace hpdro::io {

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    require(file.good(), ErrorCode::io, "cannot read " + path);
    std::ostringstream buf;
    buf << file.rdbuf();
    return buf.str();
}

json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::config, origin + ": " + e.what());
    }
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& context) {
    require(obj.is_object(), ErrorCode::config, context + " must be an object");
    for (const auto& item : obj.items())
        require(allowed.count(item.key()) == 1, ErrorCode::config,
                "unknown key '" + item.key() + "' in " + context);
}

const json& field(const json& obj, const std::string& key,
                  const std::string& context) {
    const auto it = obj.find(key);
    require(it != obj.end(), ErrorCode::config,
            context + ": missing required key '" + key + "'");
    return *it;
}

double get_num(const json& obj, const std::string& key,
               const std::string& context) {
    const json& v = field(obj, key, context);
    require(v.is_number(), ErrorCode::config,
            context + ": '" + key + "' must be a number");
    return v.get<double>();
}

double get_num_or(const json& obj, const std::string& key, double fallback,
                  const std::string& context) {
    if (!obj.contains(key)) return fallback;
    return get_num(obj, key, context);
}

long get_int(const json& obj, const std::string& key,
             const std::string& context) {
    const json& v = field(obj, key, context);
    require(v.is_number_integer(), ErrorCode::config,
            context + ": '" + key + "' must be an integer");
    return v.get<long>();
}

long get_int_or(const json& obj, const std::string& key, long fallback,
                const std::string& context) {
    if (!obj.contains(key)) return fallback;
    return get_int(obj, key, context);
}

std::string get_str(const json& obj, const std::string& key,
                    const std::string& context) {
    const json& v = field(obj, key, context);
    require(v.is_string(), ErrorCode::config,
            context + ": '" + key + "' must be a string");
    return v.get<std::string>();
}

std::string get_str_or(const json& obj, const std::string& key,
                       const std::string& fallback, const std::string& context) {
    if (!obj.contains(key)) return fallback;
    return get_str(obj, key, context);
}

bool get_bool_or(const json& obj, const std::string& key, bool fallback,
                 const std::string& context) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    require(v.is_boolean(), ErrorCode::config,
            context + ": '" + key + "' must be true or false");
    return v.get<bool>();
}

/// Paths inside a manifest travel with it: resolve relative ones against the
/// manifest's own directory.
std::string resolve(const std::string& rel, const std::string& manifest_path) {
    std::filesystem::path p(rel);
    if (p.is_absolute()) return rel;
    return (std::filesystem::path(manifest_path).parent_path() / p).string();
}

} // namespace

void ExperimentManifest::validate() const {
    require(horizon >= 3, ErrorCode::config,
            "horizon must be at least 3 slots, got " + std::to_string(horizon));
    require(dt_hours > 0.0, ErrorCode::config, "dt_hours must be positive");
    require(variant == "deterministic" || variant == "ga-dro" ||
                variant == "kdea-dro" || variant == "ro",
            ErrorCode::config,
            "variant must be one of deterministic|ga-dro|kdea-dro|ro, got '" +
                variant + "'");
    uncertainty::radius_mode_from_string(radius_mode); // throws on bad value
    require(beta_power > 0.0 && beta_power <= 1.0, ErrorCode::config,
            "beta_power must lie in (0,1]");
    require(beta_temp > 0.0 && beta_temp <= 1.0, ErrorCode::config,
            "beta_temp must lie in (0,1]");
    require(bandwidth_power > 0.0 && bandwidth_temp > 0.0, ErrorCode::config,
            "bandwidths must be positive");
    require(interval_coverage > 0.0 && interval_coverage < 1.0, ErrorCode::config,
            "interval_coverage must lie in (0,1)");
    require(solver.gap >= 0.0, ErrorCode::config, "solver.gap must be >= 0");
    require(solver.time_limit_s > 0.0, ErrorCode::config,
            "solver.time_limit_s must be positive");
    require(solver.node_limit >= 0, ErrorCode::config,
            "solver.node_limit must be >= 0 (0 = unlimited)");
    require(trials >= 1, ErrorCode::config, "trials must be at least 1");
    require(fine_dt_seconds > 0.0, ErrorCode::config,
            "fine_dt_seconds must be positive");
    require(!out_dir.empty(), ErrorCode::config, "out_dir must be set");
    for (const auto* p : {&files.houses, &files.forecast, &files.price,
                          &files.power_errors, &files.temp_errors})
        require(!p->empty(), ErrorCode::config,
                "all five input file paths must be set");
}

ExperimentManifest load_manifest(const std::string& path) {
    const std::string text = slurp(path);
    const json doc = parse_json(text, path);
    check_keys(doc,
               {"files", "horizon", "dt_hours", "variant", "beta_power",
                "beta_temp", "radius_mode", "bandwidth_power", "bandwidth_temp",
                "interval_coverage", "solver", "trials", "seed", "out_dir",
                "fine_dt_seconds", "cyclic_switching",
                "symmetric_lower_margins"},
               path);

    ExperimentManifest m;
    const json& files = field(doc, "files", path);
    check_keys(files, {"houses", "forecast", "price", "power_errors",
                       "temp_errors"},
               path + ".files");
    m.files.houses = resolve(get_str(files, "houses", path), path);
    m.files.forecast = resolve(get_str(files, "forecast", path), path);
    m.files.price = resolve(get_str(files, "price", path), path);
    m.files.power_errors = resolve(get_str(files, "power_errors", path), path);
    m.files.temp_errors = resolve(get_str(files, "temp_errors", path), path);

    m.horizon = static_cast<int>(get_int(doc, "horizon", path));
    m.dt_hours = get_num(doc, "dt_hours", path);
    m.variant = get_str_or(doc, "variant", m.variant, path);
    m.beta_power = get_num_or(doc, "beta_power", m.beta_power, path);
    m.beta_temp = get_num_or(doc, "beta_temp", m.beta_temp, path);
    m.radius_mode = get_str_or(doc, "radius_mode", m.radius_mode, path);
    m.bandwidth_power = get_num_or(doc, "bandwidth_power", m.bandwidth_power, path);
    m.bandwidth_temp = get_num_or(doc, "bandwidth_temp", m.bandwidth_temp, path);
    m.interval_coverage =
        get_num_or(doc, "interval_coverage", m.interval_coverage, path);
    if (doc.contains("solver")) {
        const json& s = doc.at("solver");
        check_keys(s, {"gap", "time_limit_s", "node_limit"}, path + ".solver");
        m.solver.gap = get_num_or(s, "gap", m.solver.gap, path + ".solver");
        m.solver.time_limit_s =
            get_num_or(s, "time_limit_s", m.solver.time_limit_s, path + ".solver");
        m.solver.node_limit =
            get_int_or(s, "node_limit", m.solver.node_limit, path + ".solver");
    }
    m.trials = static_cast<int>(get_int_or(doc, "trials", m.trials, path));
    if (doc.contains("seed")) {
        const json& v = doc.at("seed");
        require(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0),
                ErrorCode::config, path + ": 'seed' must be a nonnegative integer");
        m.seed = v.get<std::uint64_t>();
    }
    m.out_dir = get_str_or(doc, "out_dir", m.out_dir, path);
    m.fine_dt_seconds =
        get_num_or(doc, "fine_dt_seconds", m.fine_dt_seconds, path);
    m.cyclic_switching =
        get_bool_or(doc, "cyclic_switching", m.cyclic_switching, path);
    m.symmetric_lower_margins = get_bool_or(doc, "symmetric_lower_margins",
                                            m.symmetric_lower_margins, path);

    m.source_path = path;
    m.content_hash = RandomStream::fnv1a64(text);
    m.validate();
    return m;
}

std::string manifest_json(const ExperimentManifest& m) {
    json doc;
    doc["tool_version"] = kToolVersion;
    char hash[24];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(m.content_hash));
    doc["manifest_hash"] = hash;
    doc["files"] = {{"houses", m.files.houses},
                    {"forecast", m.files.forecast},
                    {"price", m.files.price},
                    {"power_errors", m.files.power_errors},
                    {"temp_errors", m.files.temp_errors}};
    doc["horizon"] = m.horizon;
    doc["dt_hours"] = m.dt_hours;
    doc["variant"] = m.variant;
    doc["beta_power"] = m.beta_power;
    doc["beta_temp"] = m.beta_temp;
    doc["radius_mode"] = m.radius_mode;
    doc["bandwidth_power"] = m.bandwidth_power;
    doc["bandwidth_temp"] = m.bandwidth_temp;
    doc["interval_coverage"] = m.interval_coverage;
    doc["solver"] = {{"gap", m.solver.gap},
                     {"time_limit_s", m.solver.time_limit_s},
                     {"node_limit", m.solver.node_limit}};
    doc["trials"] = m.trials;
    doc["seed"] = m.seed;
    doc["out_dir"] = m.out_dir;
    doc["fine_dt_seconds"] = m.fine_dt_seconds;
    doc["cyclic_switching"] = m.cyclic_switching;
    doc["symmetric_lower_margins"] = m.symmetric_lower_margins;
    return doc.dump(2) + "\n";
}

HouseFile load_houses(const std::string& path) {
    const json doc = parse_json(slurp(path), path);
    check_keys(doc, {"houses", "zones"}, path);
    const json& houses = field(doc, "houses", path);
    const json& zones = field(doc, "zones", path);
    require(houses.is_array() && !houses.empty(), ErrorCode::config,
            path + ": 'houses' must be a non-empty array");
    require(zones.is_array() && !zones.empty(), ErrorCode::config,
            path + ": 'zones' must be a non-empty array");

    HouseFile out;
    out.houses.reserve(houses.size());
    for (std::size_t i = 0; i < houses.size(); ++i) {
        const std::string ctx = path + ".houses[" + std::to_string(i) + "]";
        const json& h = houses[i];
        check_keys(h,
                   {"id", "R_degC_per_kW", "C_kWh_per_degC", "R_w_degC_per_kW",
                    "C_w_kWh_per_degC", "P_hp_kW", "cop", "eff_w2h", "T0_degC",
                    "Tw0_degC", "T_lo_degC", "T_hi_degC", "Tw_lo_degC",
                    "Tw_hi_degC"},
                   ctx);
        thermal::HouseSpec spec;
        spec.id = static_cast<int>(get_int(h, "id", ctx));
        spec.R = get_num(h, "R_degC_per_kW", ctx);
        spec.C = get_num(h, "C_kWh_per_degC", ctx);
        spec.R_w = get_num(h, "R_w_degC_per_kW", ctx);
        spec.C_w = get_num(h, "C_w_kWh_per_degC", ctx);
        spec.P_hp = get_num(h, "P_hp_kW", ctx);
        spec.cop = get_num_or(h, "cop", 3.0, ctx);
        spec.eff_w2h = get_num_or(h, "eff_w2h", 1.0, ctx);
        spec.T0 = get_num_or(h, "T0_degC", 20.0, ctx);
        spec.Tw0 = get_num_or(h, "Tw0_degC", 45.0, ctx);
        spec.T_lo = get_num_or(h, "T_lo_degC", 18.0, ctx);
        spec.T_hi = get_num_or(h, "T_hi_degC", 24.0, ctx);
        spec.Tw_lo = get_num_or(h, "Tw_lo_degC", 40.0, ctx);
        spec.Tw_hi = get_num_or(h, "Tw_hi_degC", 45.0, ctx);
        try {
            spec.validate();
        } catch (const Error& e) {
            throw Error(e.code(), ctx + ": " + e.what());
        }
        out.houses.push_back(spec);
    }

    out.zones.reserve(zones.size());
    for (std::size_t z = 0; z < zones.size(); ++z) {
        const std::string ctx = path + ".zones[" + std::to_string(z) + "]";
        const json& zj = zones[z];
        check_keys(zj, {"houses", "trans_capacity_kW", "psi_per_kW"}, ctx);
        model::ZoneSpec zone;
        const json& members = field(zj, "houses", ctx);
        require(members.is_array() && !members.empty(), ErrorCode::config,
                ctx + ": 'houses' must be a non-empty array of house ids");
        for (const auto& idj : members) {
            require(idj.is_number_integer(), ErrorCode::config,
                    ctx + ": house ids must be integers");
            zone.houses.push_back(idj.get<int>());
        }
        zone.trans_capacity = get_num(zj, "trans_capacity_kW", ctx);
        zone.psi = get_num(zj, "psi_per_kW", ctx);
        try {
            zone.validate();
        } catch (const Error& e) {
            throw Error(e.code(), ctx + ": " + e.what());
        }
        out.zones.push_back(std::move(zone));
    }
    return out;
}

ParsedExperiment parse_configs(const ExperimentManifest& manifest) {
    ParsedExperiment parsed;
    HouseFile hf = load_houses(manifest.files.houses);
    parsed.houses = std::move(hf.houses);
    parsed.zones = std::move(hf.zones);

    load_forecast_csv(manifest.files.forecast,
                      static_cast<int>(parsed.zones.size()), parsed.forecast);
    require(parsed.forecast.H == manifest.horizon, ErrorCode::config,
            manifest.files.forecast + ": " + std::to_string(parsed.forecast.H) +
                " rows but the manifest horizon is " +
                std::to_string(manifest.horizon));
    parsed.forecast.dt = manifest.dt_hours;
    load_price_csv(manifest.files.price, parsed.forecast);
    parsed.forecast.validate(parsed.zones.size());

    parsed.power_history =
        load_error_csv(manifest.files.power_errors, manifest.horizon, "power");
    parsed.temp_history =
        load_error_csv(manifest.files.temp_errors, manifest.horizon, "temp");
    return parsed;
}

} // namespace hpdro::io
