#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hpdro/errors.hpp"
#include "hpdro/thermal.hpp"
#include "hpdro/uncertainty.hpp"

namespace hpdro::model {

/// One transformer zone: the houses behind it, its rating, and the peak cost
/// factor ψ that prices the zone's maximum loading.
struct ZoneSpec {
    std::vector<int> houses; ///< member house ids
    double trans_capacity = 0.0; ///< kW
    double psi = 0.0;            ///< $/kW

    void validate() const;
};

/// Day-ahead inputs: outdoor temperature forecast, per-zone net non-HP demand
/// forecast (load minus PV), and the TOU price curve.
struct ForecastSet {
    std::vector<double> T_out_hat;              ///< °C, length H
    std::vector<std::vector<double>> P_sum_hat; ///< kW, per zone, length H
    std::vector<double> price;                  ///< $/kWh, length H
    int H = 0;
    double dt = 0.0; ///< hours per slot

    void validate(std::size_t zone_count) const;
};

enum class Relation { le, ge, eq };

/// One linear constraint row. `terms` is sparse (variable index, coefficient),
/// sorted by index. `tag` names what the row enforces and where, e.g.
/// "peak[z0,t17]" or "switch[k2,t5,up]"; the tag families are
/// peak, capacity, comfort_hi, comfort_lo, tank_hold, switch.
struct LinearRow {
    std::vector<std::pair<int, double>> terms;
    Relation rel = Relation::le;
    double rhs = 0.0;
    std::string tag;
};

/// Explicit MILP over binaries x[k,t] (house k, slot t, index k·H+t) and one
/// continuous peak variable per zone (index N·H+z). Minimization.
struct MilpInstance {
    int N = 0, H = 0, Z = 0;
    std::vector<std::string> var_names;
    std::vector<double> var_lower, var_upper;
    std::vector<bool> is_binary;
    std::vector<double> objective;
    std::vector<LinearRow> rows;

    int x_index(int k, int t) const { return k * H + t; }
    int peak_index(int z) const { return N * H + z; }
    int num_vars() const { return N * H + Z; }
};

/// Per-slot constants added to the forecasts to absorb worst-case forecast
/// error: `power` widens each zone's demand in the peak rows; `temp_up`
/// shifts the outdoor forecast warmer in upper comfort rows; `temp_dn`
/// shifts it colder in lower comfort and tank-hold rows. All-zero margins
/// give the plain deterministic model.
struct Margins {
    std::vector<double> power;   ///< kW, length H
    std::vector<double> temp_up; ///< °C, length H
    std::vector<double> temp_dn; ///< °C, length H
};

struct BuildOptions {
    /// Also forbid switching across the day boundary (wrap-around rows).
    bool cyclic_switching = false;
    /// Reuse the upper-bound margin for lower bounds instead of the
    /// sign-correct margin fitted on negated errors (for comparison runs
    /// against sources that assume symmetric error distributions).
    bool symmetric_lower_margins = false;
};

/// Closed interval of forecast-error realizations for the interval-robust
/// variant.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Empirical central interval covering `coverage` of the samples
/// (e.g. 0.95 → [2.5th, 97.5th] percentiles, linear interpolation).
Interval empirical_interval(std::vector<double> samples, double coverage);

/// Objective coefficients over the shared variable catalogue:
/// Σ_z ψ_z·peak_z + Σ_{k,t} price_t·dt·P_hp,k·x[k,t].
std::vector<double> build_objective(const std::vector<thermal::HouseSpec>& houses,
                                    const std::vector<ZoneSpec>& zones,
                                    const ForecastSet& forecast);

/// Two rows per interior slot t = 1..H−2 forbidding a mode held for a single
/// slot: 2x_t − x_{t−1} − x_{t+1} ≤ 1 and ≥ −1. Variable indices are local
/// slot indices 0..H−1 (one house); builders remap them per house.
std::vector<LinearRow> switching_rows(int H);

/// Shared assembly used by all four variants: identical variables and
/// constraint structure, margins folded into right-hand sides only.
MilpInstance build_with_margins(const std::vector<thermal::HouseSpec>& houses,
                                const std::vector<ZoneSpec>& zones,
                                const ForecastSet& forecast,
                                const Margins& margins,
                                const BuildOptions& options = {});

MilpInstance build_deterministic(const std::vector<thermal::HouseSpec>& houses,
                                 const std::vector<ZoneSpec>& zones,
                                 const ForecastSet& forecast,
                                 const BuildOptions& options = {});

/// KL-DRO with kernel-density nominals; per-slot models and radii for the
/// power stream and the temperature stream.
MilpInstance build_kdea_dro(const std::vector<thermal::HouseSpec>& houses,
                            const std::vector<ZoneSpec>& zones,
                            const ForecastSet& forecast,
                            const std::vector<uncertainty::KdeModel>& power_models,
                            const std::vector<uncertainty::KdeModel>& temp_models,
                            const std::vector<uncertainty::AmbiguityRadius>& power_radii,
                            const std::vector<uncertainty::AmbiguityRadius>& temp_radii,
                            const BuildOptions& options = {});

/// KL-DRO with Gaussian nominals: margins μ + σ√(2η) (lower bounds use the
/// negated stream, −μ + σ√(2η), unless symmetric_lower_margins).
MilpInstance build_ga_dro(const std::vector<thermal::HouseSpec>& houses,
                          const std::vector<ZoneSpec>& zones,
                          const ForecastSet& forecast,
                          const std::vector<uncertainty::GaussianModel>& power_models,
                          const std::vector<uncertainty::GaussianModel>& temp_models,
                          const std::vector<uncertainty::AmbiguityRadius>& power_radii,
                          const std::vector<uncertainty::AmbiguityRadius>& temp_radii,
                          const BuildOptions& options = {});

/// Interval robust: worst interval end substituted per constraint row.
MilpInstance build_ro(const std::vector<thermal::HouseSpec>& houses,
                      const std::vector<ZoneSpec>& zones,
                      const ForecastSet& forecast,
                      const std::vector<Interval>& power_intervals,
                      const std::vector<Interval>& temp_intervals,
                      const BuildOptions& options = {});

/// Solver output. `raw` is the full variable vector in catalogue order
/// (used by validate_schedule and the report writers).
struct ScheduleSolution {
    enum class Status { optimal, gap_feasible, infeasible, timeout };

    std::vector<std::vector<int>> x; ///< N×H binaries
    std::vector<double> P_max;       ///< per zone, kW
    double objective_value = 0.0;
    double gap = 0.0;
    Status status = Status::infeasible;
    std::vector<double> raw;
    long nodes = 0;
};

std::string to_string(ScheduleSolution::Status status);

struct ViolationReport {
    struct Item {
        std::string tag;
        double violation = 0.0; ///< amount by which the row is broken (> 0)
        double slack = 0.0;     ///< rhs − lhs as evaluated
    };
    std::vector<Item> items;
    bool ok() const { return items.empty(); }
};

/// Evaluates every constraint row of the instance at the solution's variable
/// vector; rows broken by more than `tol` are reported with their tags.
ViolationReport validate_schedule(const ScheduleSolution& solution,
                                  const MilpInstance& instance,
                                  double tol = 1e-6);

} // namespace hpdro::model
