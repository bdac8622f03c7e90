#pragma once

#include <functional>
#include <string>

#include "hpdro/config.hpp"
#include "hpdro/evaluation.hpp"
#include "hpdro/model.hpp"

namespace hpdro::io {

/// Log sink; levels: 0 = errors only, 1 = stage progress, 2 = solver detail.
/// The default sink writes to stderr and honours the HPDRO_LOG environment
/// variable (quiet|info|debug).
using LogFn = std::function<void(int level, const std::string& line)>;
LogFn stderr_logger();

/// In-memory results of a full run, independent of the artifact files.
struct PipelineResult {
    model::MilpInstance instance;
    model::ScheduleSolution solution;
    evaluation::EvaluationReport schedule_report;
    evaluation::EvaluationReport baseline_report;
};

/// Fit → build → solve → monte-carlo → report. Writes into
/// manifest.out_dir: schedule.csv, solution_summary.csv, report.csv,
/// report_baseline.csv, report_summary.txt, plot_data.csv, model.mps and
/// manifest_resolved.json, each atomically. Failures carry a stage tag in
/// the diagnostic. `export_mps_path` additionally copies the model there.
PipelineResult run_pipeline(const ExperimentManifest& manifest,
                            const LogFn& log = stderr_logger(),
                            const std::string& export_mps_path = {});

/// Stages, runnable standalone on a manifest (they re-derive their inputs
/// deterministically, so artifacts always agree with a full run).
model::MilpInstance build_instance(const ExperimentManifest& manifest,
                                   const ParsedExperiment& parsed);
evaluation::ScenarioSet make_scenarios(const ExperimentManifest& manifest,
                                       const ParsedExperiment& parsed);

} // namespace hpdro::io
