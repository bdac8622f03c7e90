#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hpdro/model.hpp"
#include "hpdro/thermal.hpp"
#include "hpdro/uncertainty.hpp"

namespace hpdro::evaluation {

/// Pre-drawn forecast-error realizations shared by every variant under test,
/// so cross-variant comparisons see identical disturbances.
struct ScenarioSet {
    int trials = 0;
    std::vector<std::vector<double>> temp_errors;  ///< [trial][slot], degC
    std::vector<std::vector<double>> power_errors; ///< [trial][slot], kW
    std::uint64_t seed = 0;

    void validate(int H) const;
};

struct Summary {
    double min = 0.0;
    double mean = 0.0;
    double max = 0.0;
};

struct EvaluationReport {
    int trials = 0;
    std::vector<double> p_max;     ///< per-trial fleet peak (kW)
    std::vector<double> peak_cost; ///< per-trial transformer peak charge ($)
    std::vector<double> elec_cost; ///< per-trial heat-pump energy cost ($)
    std::vector<double> comfort;   ///< per-trial worst-house comfort rate

    Summary p_max_summary;
    Summary peak_cost_summary;
    Summary elec_cost_summary;
    Summary comfort_summary;

    /// Slot-end indoor temperatures, [trial][house][slot]; only filled when
    /// requested, the matrices are large.
    std::vector<std::vector<std::vector<double>>> indoor;
};

/// Tank-thermostat controller that ignores prices and transformer limits:
/// switch ON when the tank falls to its lower band edge, OFF when it reaches
/// the upper edge, hold otherwise. Starts OFF unless the tank is already at
/// or below the lower edge. Simulated slot by slot with the exact one-step
/// scheme; returns the resulting ON/OFF matrix, houses by slots.
std::vector<std::vector<int>> hysteresis_baseline(
    const std::vector<thermal::HouseSpec>& houses,
    const std::vector<double>& T_out, double dt);

/// Aggregate-load forecast errors: 0.75 - 0.15 * (chi-squared, 5 dof) per
/// entry, a left-skewed zero-mean distribution bounded above by 0.75.
std::vector<std::vector<double>> sample_power_errors(int trials, int H,
                                                     std::uint64_t seed);

/// Outdoor-temperature forecast errors: one independent Gaussian per slot.
std::vector<std::vector<double>> sample_temp_errors(
    int trials, int H, const std::vector<uncertainty::GaussianModel>& per_slot,
    std::uint64_t seed);

/// Fraction of slots inside the comfort band, taken per house and then
/// minimized over houses: the fleet is only as comfortable as its worst home.
double comfort_rate(const std::vector<std::vector<double>>& indoor_by_house,
                    const std::vector<std::pair<double, double>>& bounds);

struct McOptions {
    double fine_dt_seconds = 5.0;
    bool euler = false;
    bool keep_trajectories = false;
    unsigned threads = 1;
};

/// Replays a fixed day-ahead schedule against the fine-step plant under each
/// error realization. Per trial: perturbed outdoor temperature drives the
/// plant, perturbed net load adds to the heat-pump draw, and the report
/// collects fleet peak, peak charge, energy cost, and comfort rate.
EvaluationReport monte_carlo_evaluate(const std::vector<std::vector<int>>& x,
                                      const std::vector<thermal::HouseSpec>& houses,
                                      const std::vector<model::ZoneSpec>& zones,
                                      const model::ForecastSet& forecast,
                                      const ScenarioSet& scenarios,
                                      const McOptions& options = {});

/// Same replay, but the schedule is re-derived per trial by the hysteresis
/// controller reacting to that trial's realized outdoor temperature. This is
/// the "unscheduled" reference the optimized variants are compared against.
EvaluationReport monte_carlo_baseline(const std::vector<thermal::HouseSpec>& houses,
                                      const std::vector<model::ZoneSpec>& zones,
                                      const model::ForecastSet& forecast,
                                      const ScenarioSet& scenarios,
                                      const McOptions& options = {});

} // namespace hpdro::evaluation
