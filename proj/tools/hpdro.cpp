#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "hpdro/csv.hpp"
#include "hpdro/errors.hpp"
#include "hpdro/evaluation.hpp"
#include "hpdro/milp.hpp"
#include "hpdro/pipeline.hpp"
#include "hpdro/thermal.hpp"
#include "hpdro/uncertainty.hpp"

namespace {

using namespace hpdro;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string artifact(const io::ExperimentManifest& m, const std::string& name) {
    return (std::filesystem::path(m.out_dir) / name).string();
}

void ensure_out_dir(const io::ExperimentManifest& m) {
    std::error_code ec;
    std::filesystem::create_directories(m.out_dir, ec);
    require(!ec, ErrorCode::io,
            "cannot create output directory " + m.out_dir + ": " + ec.message());
}

std::vector<int> house_ids(const io::ParsedExperiment& parsed) {
    std::vector<int> ids;
    ids.reserve(parsed.houses.size());
    for (const auto& h : parsed.houses) ids.push_back(h.id);
    return ids;
}

evaluation::Summary summarize(const std::vector<double>& v) {
    evaluation::Summary s;
    if (v.empty()) return s;
    s.min = *std::min_element(v.begin(), v.end());
    s.max = *std::max_element(v.begin(), v.end());
    double acc = 0.0;
    for (const double x : v) acc += x;
    s.mean = acc / static_cast<double>(v.size());
    return s;
}

evaluation::EvaluationReport load_report(const std::string& path) {
    const io::CsvTable t = io::read_csv(path);
    require(t.header ==
                std::vector<std::string>{"trial", "p_max_kW", "peak_cost",
                                         "elec_cost", "comfort_rate"},
            ErrorCode::config, path + ": not a per-trial report CSV");
    evaluation::EvaluationReport r;
    r.trials = static_cast<int>(t.rows.size());
    for (const auto& row : t.rows) {
        r.p_max.push_back(std::stod(row[1]));
        r.peak_cost.push_back(std::stod(row[2]));
        r.elec_cost.push_back(std::stod(row[3]));
        r.comfort.push_back(std::stod(row[4]));
    }
    r.p_max_summary = summarize(r.p_max);
    r.peak_cost_summary = summarize(r.peak_cost);
    r.elec_cost_summary = summarize(r.elec_cost);
    r.comfort_summary = summarize(r.comfort);
    return r;
}

void print_comparison(const evaluation::EvaluationReport& sched,
                      const evaluation::EvaluationReport& base,
                      const std::string& variant) {
    std::fputs(io::summary_text("schedule " + variant, sched).c_str(), stdout);
    std::fputs("\n", stdout);
    std::fputs(io::summary_text("baseline hysteresis", base).c_str(), stdout);
    if (base.p_max_summary.mean > 0.0 && base.elec_cost_summary.mean > 0.0) {
        std::printf("\n  peak_reduction_vs_baseline = %s%%\n",
                    fmt(100.0 * (1.0 - sched.p_max_summary.mean /
                                           base.p_max_summary.mean))
                        .c_str());
        std::printf("  cost_reduction_vs_baseline = %s%%\n",
                    fmt(100.0 * (1.0 - sched.elec_cost_summary.mean /
                                           base.elec_cost_summary.mean))
                        .c_str());
    }
}

int run(const CLI::App& app, const io::ExperimentManifest& manifest,
        const std::string& export_mps_path) {
    const io::LogFn log = io::stderr_logger();

    if (app.got_subcommand("pipeline")) {
        const auto result = io::run_pipeline(manifest, log, export_mps_path);
        print_comparison(result.schedule_report, result.baseline_report,
                         manifest.variant);
        return 0;
    }

    const auto parsed = io::parse_configs(manifest);

    if (app.got_subcommand("fit")) {
        const auto mode = uncertainty::radius_mode_from_string(manifest.radius_mode);
        const auto rp = uncertainty::radius_schedule(
            manifest.beta_power, manifest.horizon, mode, manifest.dt_hours);
        const auto rt = uncertainty::radius_schedule(
            manifest.beta_temp, manifest.horizon, mode, manifest.dt_hours);
        std::string out = io::provenance_line(manifest.content_hash);
        out += "slot,power_mu,power_sigma,power_n,temp_mu,temp_sigma,temp_n,"
               "eta_power,eta_temp\n";
        for (int t = 0; t < manifest.horizon; ++t) {
            const std::size_t s = static_cast<std::size_t>(t);
            const auto gp = uncertainty::fit_gaussian(parsed.power_history[s]);
            const auto gt = uncertainty::fit_gaussian(parsed.temp_history[s]);
            out += std::to_string(t) + ',' + fmt(gp.mu) + ',' + fmt(gp.sigma) +
                   ',' + std::to_string(parsed.power_history[s].samples.size()) +
                   ',' + fmt(gt.mu) + ',' + fmt(gt.sigma) + ',' +
                   std::to_string(parsed.temp_history[s].samples.size()) + ',' +
                   fmt(rp[s].eta) + ',' + fmt(rt[s].eta) + '\n';
        }
        ensure_out_dir(manifest);
        io::write_file_atomic(artifact(manifest, "fit_summary.csv"), out);
        log(1, "[fit] wrote " + artifact(manifest, "fit_summary.csv"));
        return 0;
    }

    if (app.got_subcommand("build")) {
        const auto instance = io::build_instance(manifest, parsed);
        ensure_out_dir(manifest);
        io::write_file_atomic(artifact(manifest, "model.mps"),
                              milp::mps_string(instance));
        if (!export_mps_path.empty())
            io::write_file_atomic(export_mps_path, milp::mps_string(instance));
        io::write_file_atomic(artifact(manifest, "manifest_resolved.json"),
                              io::manifest_json(manifest));
        std::printf("variant=%s vars=%d rows=%zu binaries=%d\n",
                    manifest.variant.c_str(), instance.num_vars(),
                    instance.rows.size(), instance.N * instance.H);
        return 0;
    }

    if (app.got_subcommand("solve")) {
        const auto instance = io::build_instance(manifest, parsed);
        milp::BnbConfig cfg;
        cfg.gap_tol = manifest.solver.gap;
        cfg.time_limit_s = manifest.solver.time_limit_s;
        cfg.node_limit = manifest.solver.node_limit > 0
                             ? manifest.solver.node_limit
                             : std::numeric_limits<long>::max();
        cfg.log = [&log](const std::string& line) { log(2, line); };
        const auto solution = milp::solve_milp(instance, cfg);
        if (solution.status == model::ScheduleSolution::Status::infeasible)
            throw Error(ErrorCode::infeasible, "model infeasible");
        if (solution.status == model::ScheduleSolution::Status::timeout)
            throw Error(ErrorCode::timeout,
                        "limits reached without an incumbent");
        ensure_out_dir(manifest);
        io::write_file_atomic(
            artifact(manifest, "schedule.csv"),
            io::schedule_csv(solution.x, house_ids(parsed),
                             manifest.content_hash));
        std::printf("status=%s objective=%s gap=%s nodes=%ld\n",
                    model::to_string(solution.status).c_str(),
                    fmt(solution.objective_value).c_str(),
                    fmt(solution.gap).c_str(), solution.nodes);
        return 0;
    }

    if (app.got_subcommand("simulate")) {
        const auto table = io::read_csv(artifact(manifest, "schedule.csv"));
        const auto x = io::parse_schedule_csv(table, house_ids(parsed));
        std::string out = io::provenance_line(manifest.content_hash);
        out += "house_id,slot,T_degC,Tw_degC\n";
        for (std::size_t k = 0; k < parsed.houses.size(); ++k) {
            const auto traj = thermal::simulate_fine(
                parsed.houses[k], x[k], parsed.forecast.T_out_hat,
                parsed.forecast.dt, manifest.fine_dt_seconds);
            for (int t = 0; t < parsed.forecast.H; ++t) {
                const std::size_t end =
                    static_cast<std::size_t>(t + 1) * traj.steps_per_slot;
                out += std::to_string(parsed.houses[k].id) + ',' +
                       std::to_string(t) + ',' + fmt(traj.T[end]) + ',' +
                       fmt(traj.Tw[end]) + '\n';
            }
        }
        io::write_file_atomic(artifact(manifest, "trajectories.csv"), out);
        log(1, "[simulate] wrote " + artifact(manifest, "trajectories.csv"));
        return 0;
    }

    if (app.got_subcommand("montecarlo")) {
        const auto table = io::read_csv(artifact(manifest, "schedule.csv"));
        const auto x = io::parse_schedule_csv(table, house_ids(parsed));
        const auto scenarios = io::make_scenarios(manifest, parsed);
        evaluation::McOptions mc;
        mc.fine_dt_seconds = manifest.fine_dt_seconds;
        mc.threads = std::max(1u, std::thread::hardware_concurrency());
        const auto sched = evaluation::monte_carlo_evaluate(
            x, parsed.houses, parsed.zones, parsed.forecast, scenarios, mc);
        const auto base = evaluation::monte_carlo_baseline(
            parsed.houses, parsed.zones, parsed.forecast, scenarios, mc);
        io::write_file_atomic(artifact(manifest, "report.csv"),
                              io::report_csv(sched, manifest.content_hash));
        io::write_file_atomic(artifact(manifest, "report_baseline.csv"),
                              io::report_csv(base, manifest.content_hash));
        print_comparison(sched, base, manifest.variant);
        return 0;
    }

    if (app.got_subcommand("report")) {
        const auto sched = load_report(artifact(manifest, "report.csv"));
        const auto base = load_report(artifact(manifest, "report_baseline.csv"));
        print_comparison(sched, base, manifest.variant);
        return 0;
    }

    throw Error(ErrorCode::invalid_argument, "no subcommand selected");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Day-ahead ON/OFF scheduling of residential heat-pump fleets "
                 "with KL-divergence distributionally robust forecast margins"};
    app.require_subcommand(1);

    std::string manifest_path;
    std::string variant, radius_mode, out_dir, export_mps_path;
    double beta_power = 0, beta_temp = 0, gap = 0, time_limit = 0;
    long trials = 0;
    unsigned long long seed = 0;

    app.add_option("--manifest", manifest_path, "experiment manifest (JSON)")
        ->required();
    auto* o_variant = app.add_option(
        "--variant", variant, "deterministic|ga-dro|kdea-dro|ro (overrides)");
    auto* o_bp = app.add_option("--beta-power", beta_power,
                                "power-stream risk level in (0,1]");
    auto* o_bt = app.add_option("--beta-temp", beta_temp,
                                "temperature-stream risk level in (0,1]");
    auto* o_rm = app.add_option("--radius-mode", radius_mode,
                                "constant|sqrt-t radius schedule");
    auto* o_gap = app.add_option("--gap", gap, "relative MIP gap tolerance");
    auto* o_tl = app.add_option("--time-limit", time_limit,
                                "solver time limit, seconds");
    auto* o_tr = app.add_option("--trials", trials, "Monte Carlo trials");
    auto* o_seed = app.add_option("--seed", seed, "scenario RNG seed");
    auto* o_out = app.add_option("--out", out_dir, "output directory");
    app.add_option("--export-mps", export_mps_path,
                   "also write the model in MPS format here");

    for (const char* name : {"fit", "build", "solve", "simulate", "montecarlo",
                             "report", "pipeline"}) {
        auto* sub = app.add_subcommand(name);
        sub->fallthrough();
    }
    app.get_subcommand("fit")->description("fit error models, write fit_summary.csv");
    app.get_subcommand("build")->description("assemble the MILP, write model.mps");
    app.get_subcommand("solve")->description("solve the MILP, write schedule.csv");
    app.get_subcommand("simulate")
        ->description("replay schedule.csv against the fine plant, no errors");
    app.get_subcommand("montecarlo")
        ->description("evaluate schedule.csv and the baseline under scenarios");
    app.get_subcommand("report")->description("print summaries from report CSVs");
    app.get_subcommand("pipeline")
        ->description("fit, build, solve, evaluate and report in one run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        auto manifest = hpdro::io::load_manifest(manifest_path);
        if (o_variant->count()) manifest.variant = variant;
        if (o_bp->count()) manifest.beta_power = beta_power;
        if (o_bt->count()) manifest.beta_temp = beta_temp;
        if (o_rm->count()) manifest.radius_mode = radius_mode;
        if (o_gap->count()) manifest.solver.gap = gap;
        if (o_tl->count()) manifest.solver.time_limit_s = time_limit;
        if (o_tr->count()) manifest.trials = static_cast<int>(trials);
        if (o_seed->count()) manifest.seed = seed;
        if (o_out->count()) manifest.out_dir = out_dir;
        manifest.validate();
        return run(app, manifest, export_mps_path);
    } catch (const hpdro::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        switch (e.code()) {
        case hpdro::ErrorCode::config:
        case hpdro::ErrorCode::invalid_argument:
        case hpdro::ErrorCode::io:
            return 2;
        case hpdro::ErrorCode::infeasible:
            return 3;
        case hpdro::ErrorCode::timeout:
            return 4;
        case hpdro::ErrorCode::numeric:
            return 1;
        }
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
