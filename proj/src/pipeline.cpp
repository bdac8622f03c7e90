#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <thread>

#include "hpdro/csv.hpp"
#include "hpdro/errors.hpp"
#include "hpdro/milp.hpp"
#include "hpdro/pipeline.hpp"

namespace hpdro::io {

namespace {

template <typename F>
auto stage(const char* name, const LogFn& log, F&& body) {
    log(1, std::string("[") + name + "] start");
    try {
        auto result = body();
        log(1, std::string("[") + name + "] done");
        return result;
    } catch (const Error& e) {
        throw Error(e.code(), std::string("[") + name + "] " + e.what());
    }
}

/// Per-slot fitted error models; only the family the chosen variant needs is
/// populated.
struct FittedUncertainty {
    std::vector<uncertainty::KdeModel> kde_power, kde_temp;
    std::vector<uncertainty::GaussianModel> ga_power, ga_temp;
    std::vector<model::Interval> iv_power, iv_temp;
    std::vector<uncertainty::AmbiguityRadius> radii_power, radii_temp;
};

FittedUncertainty fit_uncertainty(const ExperimentManifest& manifest,
                                  const ParsedExperiment& parsed) {
    FittedUncertainty f;
    const auto mode = uncertainty::radius_mode_from_string(manifest.radius_mode);
    f.radii_power = uncertainty::radius_schedule(manifest.beta_power,
                                                 manifest.horizon, mode,
                                                 manifest.dt_hours);
    f.radii_temp = uncertainty::radius_schedule(manifest.beta_temp,
                                                manifest.horizon, mode,
                                                manifest.dt_hours);
    for (int t = 0; t < manifest.horizon; ++t) {
        const auto& hp = parsed.power_history[static_cast<std::size_t>(t)];
        const auto& ht = parsed.temp_history[static_cast<std::size_t>(t)];
        if (manifest.variant == "kdea-dro") {
            f.kde_power.push_back(
                uncertainty::fit_kde(hp, manifest.bandwidth_power));
            f.kde_temp.push_back(
                uncertainty::fit_kde(ht, manifest.bandwidth_temp));
        } else if (manifest.variant == "ga-dro") {
            f.ga_power.push_back(uncertainty::fit_gaussian(hp));
            f.ga_temp.push_back(uncertainty::fit_gaussian(ht));
        } else if (manifest.variant == "ro") {
            f.iv_power.push_back(
                model::empirical_interval(hp.samples, manifest.interval_coverage));
            f.iv_temp.push_back(
                model::empirical_interval(ht.samples, manifest.interval_coverage));
        }
    }
    return f;
}

model::MilpInstance assemble(const ExperimentManifest& manifest,
                             const ParsedExperiment& parsed,
                             const FittedUncertainty& fitted) {
    model::BuildOptions options;
    options.cyclic_switching = manifest.cyclic_switching;
    options.symmetric_lower_margins = manifest.symmetric_lower_margins;
    if (manifest.variant == "deterministic")
        return model::build_deterministic(parsed.houses, parsed.zones,
                                          parsed.forecast, options);
    if (manifest.variant == "kdea-dro")
        return model::build_kdea_dro(parsed.houses, parsed.zones, parsed.forecast,
                                     fitted.kde_power, fitted.kde_temp,
                                     fitted.radii_power, fitted.radii_temp,
                                     options);
    if (manifest.variant == "ga-dro")
        return model::build_ga_dro(parsed.houses, parsed.zones, parsed.forecast,
                                   fitted.ga_power, fitted.ga_temp,
                                   fitted.radii_power, fitted.radii_temp,
                                   options);
    if (manifest.variant == "ro")
        return model::build_ro(parsed.houses, parsed.zones, parsed.forecast,
                               fitted.iv_power, fitted.iv_temp, options);
    throw Error(ErrorCode::config, "unknown variant '" + manifest.variant + "'");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string solution_summary_csv(const ExperimentManifest& manifest,
                                 const model::ScheduleSolution& solution) {
    std::string out = provenance_line(manifest.content_hash);
    out += "key,value\n";
    out += "variant," + manifest.variant + "\n";
    out += "status," + model::to_string(solution.status) + "\n";
    out += "objective," + fmt(solution.objective_value) + "\n";
    out += "gap," + fmt(solution.gap) + "\n";
    out += "nodes," + std::to_string(solution.nodes) + "\n";
    for (std::size_t z = 0; z < solution.P_max.size(); ++z)
        out += "p_max_z" + std::to_string(z) + "," + fmt(solution.P_max[z]) +
               "\n";
    return out;
}

} // namespace

LogFn stderr_logger() {
    int threshold = 1;
    if (const char* env = std::getenv("HPDRO_LOG")) {
        const std::string v(env);
        if (v == "quiet" || v == "0")
            threshold = 0;
        else if (v == "info" || v == "1")
            threshold = 1;
        else if (v == "debug" || v == "2")
            threshold = 2;
    }
    return [threshold](int level, const std::string& line) {
        if (level <= threshold) std::fprintf(stderr, "hpdro: %s\n", line.c_str());
    };
}

model::MilpInstance build_instance(const ExperimentManifest& manifest,
                                   const ParsedExperiment& parsed) {
    return assemble(manifest, parsed, fit_uncertainty(manifest, parsed));
}

evaluation::ScenarioSet make_scenarios(const ExperimentManifest& manifest,
                                       const ParsedExperiment& parsed) {
    std::vector<uncertainty::GaussianModel> per_slot;
    per_slot.reserve(static_cast<std::size_t>(manifest.horizon));
    for (const auto& h : parsed.temp_history)
        per_slot.push_back(uncertainty::fit_gaussian(h));
    evaluation::ScenarioSet s;
    s.trials = manifest.trials;
    s.seed = manifest.seed;
    s.power_errors = evaluation::sample_power_errors(manifest.trials,
                                                     manifest.horizon,
                                                     manifest.seed);
    s.temp_errors = evaluation::sample_temp_errors(manifest.trials,
                                                   manifest.horizon, per_slot,
                                                   manifest.seed);
    return s;
}

PipelineResult run_pipeline(const ExperimentManifest& manifest, const LogFn& log,
                            const std::string& export_mps_path) {
    manifest.validate();
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(manifest.out_dir, ec);
    require(!ec, ErrorCode::io,
            "cannot create output directory " + manifest.out_dir + ": " +
                ec.message());
    auto artifact = [&](const std::string& name) {
        return (fs::path(manifest.out_dir) / name).string();
    };

    PipelineResult result;
    const auto parsed =
        stage("parse", log, [&] { return parse_configs(manifest); });
    const auto fitted =
        stage("fit", log, [&] { return fit_uncertainty(manifest, parsed); });

    result.instance = stage("build", log, [&] {
        auto instance = assemble(manifest, parsed, fitted);
        write_file_atomic(artifact("model.mps"), milp::mps_string(instance));
        if (!export_mps_path.empty())
            write_file_atomic(export_mps_path, milp::mps_string(instance));
        write_file_atomic(artifact("manifest_resolved.json"),
                          manifest_json(manifest));
        log(1, "[build] vars=" + std::to_string(instance.num_vars()) +
                   " rows=" + std::to_string(instance.rows.size()));
        return instance;
    });

    result.solution = stage("solve", log, [&] {
        milp::BnbConfig cfg;
        cfg.gap_tol = manifest.solver.gap;
        cfg.time_limit_s = manifest.solver.time_limit_s;
        cfg.node_limit = manifest.solver.node_limit > 0
                             ? manifest.solver.node_limit
                             : std::numeric_limits<long>::max();
        cfg.log = [&log](const std::string& line) { log(2, line); };
        auto solution = milp::solve_milp(result.instance, cfg);
        if (solution.status == model::ScheduleSolution::Status::infeasible)
            throw Error(ErrorCode::infeasible,
                        "no schedule satisfies comfort, tank and capacity "
                        "constraints under the requested margins");
        if (solution.status == model::ScheduleSolution::Status::timeout)
            throw Error(ErrorCode::timeout,
                        "time or node limit reached before any feasible "
                        "schedule was found");
        const auto report = model::validate_schedule(solution, result.instance);
        require(report.ok(), ErrorCode::numeric,
                "solver returned a schedule violating '" +
                    (report.items.empty() ? std::string("?")
                                          : report.items.front().tag) +
                    "'");
        log(1, "[solve] status=" + model::to_string(solution.status) +
                   " objective=" + fmt(solution.objective_value) +
                   " gap=" + fmt(solution.gap) +
                   " nodes=" + std::to_string(solution.nodes));
        std::vector<int> ids;
        for (const auto& h : parsed.houses) ids.push_back(h.id);
        write_file_atomic(artifact("schedule.csv"),
                          schedule_csv(solution.x, ids, manifest.content_hash));
        write_file_atomic(artifact("solution_summary.csv"),
                          solution_summary_csv(manifest, solution));
        return solution;
    });

    const auto scenarios =
        stage("scenarios", log, [&] { return make_scenarios(manifest, parsed); });

    evaluation::McOptions mc;
    mc.fine_dt_seconds = manifest.fine_dt_seconds;
    mc.threads = std::max(1u, std::thread::hardware_concurrency());
    result.schedule_report = stage("montecarlo", log, [&] {
        return evaluation::monte_carlo_evaluate(result.solution.x, parsed.houses,
                                                parsed.zones, parsed.forecast,
                                                scenarios, mc);
    });
    result.baseline_report = stage("baseline", log, [&] {
        return evaluation::monte_carlo_baseline(parsed.houses, parsed.zones,
                                                parsed.forecast, scenarios, mc);
    });

    stage("report", log, [&] {
        write_file_atomic(artifact("report.csv"),
                          report_csv(result.schedule_report,
                                     manifest.content_hash));
        write_file_atomic(artifact("report_baseline.csv"),
                          report_csv(result.baseline_report,
                                     manifest.content_hash));
        std::string summary =
            summary_text("schedule " + manifest.variant, result.schedule_report);
        summary += "\n";
        summary += summary_text("baseline hysteresis", result.baseline_report);
        const double base_peak = result.baseline_report.p_max_summary.mean;
        const double base_cost = result.baseline_report.elec_cost_summary.mean;
        if (base_peak > 0.0 && base_cost > 0.0) {
            summary += "\n";
            summary += "  peak_reduction_vs_baseline = " +
                       fmt(100.0 * (1.0 - result.schedule_report.p_max_summary.mean /
                                              base_peak)) +
                       "%\n";
            summary += "  cost_reduction_vs_baseline = " +
                       fmt(100.0 * (1.0 -
                                    result.schedule_report.elec_cost_summary.mean /
                                        base_cost)) +
                       "%\n";
        }
        write_file_atomic(artifact("report_summary.txt"), summary);
        write_file_atomic(artifact("plot_data.csv"),
                          plot_data_csv(result.solution.x, parsed.houses,
                                        parsed.zones, parsed.forecast,
                                        manifest.content_hash));
        return 0;
    });
    return result;
}

} // namespace hpdro::io
