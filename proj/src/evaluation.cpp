#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>
#include <unordered_map>

#include "hpdro/errors.hpp"
#include "hpdro/evaluation.hpp"
#include "hpdro/rng.hpp"

namespace hpdro::evaluation {

namespace {

Summary summarize(const std::vector<double>& v) {
    Summary s;
    if (v.empty()) return s;
    s.min = *std::min_element(v.begin(), v.end());
    s.max = *std::max_element(v.begin(), v.end());
    double acc = 0.0;
    for (const double x : v) acc += x;
    s.mean = acc / static_cast<double>(v.size());
    return s;
}

std::unordered_map<int, std::size_t> house_positions(
    const std::vector<thermal::HouseSpec>& houses) {
    std::unordered_map<int, std::size_t> pos;
    pos.reserve(houses.size());
    for (std::size_t k = 0; k < houses.size(); ++k) {
        const bool fresh = pos.emplace(houses[k].id, k).second;
        require(fresh, ErrorCode::config,
                "duplicate house id " + std::to_string(houses[k].id));
    }
    return pos;
}

} // namespace

void ScenarioSet::validate(int H) const {
    require(trials >= 1, ErrorCode::invalid_argument,
            "scenario set needs at least one trial");
    require(static_cast<int>(temp_errors.size()) == trials &&
                static_cast<int>(power_errors.size()) == trials,
            ErrorCode::invalid_argument,
            "scenario matrices must have one row per trial");
    for (int i = 0; i < trials; ++i) {
        const std::size_t s = static_cast<std::size_t>(i);
        require(static_cast<int>(temp_errors[s].size()) == H &&
                    static_cast<int>(power_errors[s].size()) == H,
                ErrorCode::invalid_argument,
                "scenario row length must equal the horizon");
    }
}

std::vector<std::vector<int>> hysteresis_baseline(
    const std::vector<thermal::HouseSpec>& houses,
    const std::vector<double>& T_out, double dt) {
    require(!T_out.empty(), ErrorCode::invalid_argument,
            "outdoor trajectory is empty");
    require(dt > 0.0, ErrorCode::invalid_argument, "dt must be positive");
    const int H = static_cast<int>(T_out.size());
    std::vector<std::vector<int>> x(houses.size(),
                                    std::vector<int>(static_cast<std::size_t>(H), 0));
    for (std::size_t k = 0; k < houses.size(); ++k) {
        const auto& spec = houses[k];
        spec.validate();
        require(spec.Tw_lo < spec.Tw_hi, ErrorCode::config,
                "tank band must have positive width for house " +
                    std::to_string(spec.id));
        thermal::ThermalState state{spec.T0, spec.Tw0};
        int on = spec.Tw0 <= spec.Tw_lo ? 1 : 0;
        for (int t = 0; t < H; ++t) {
            x[k][static_cast<std::size_t>(t)] = on;
            state = thermal::step_thermal(state, on,
                                          T_out[static_cast<std::size_t>(t)],
                                          spec, dt);
            if (state.Tw <= spec.Tw_lo)
                on = 1;
            else if (state.Tw >= spec.Tw_hi)
                on = 0;
        }
    }
    return x;
}

std::vector<std::vector<double>> sample_power_errors(int trials, int H,
                                                     std::uint64_t seed) {
    require(trials >= 1 && H >= 1, ErrorCode::invalid_argument,
            "trials and horizon must be at least 1");
    RandomStream rng = RandomStream::named(seed, "power_errors");
    std::vector<std::vector<double>> m(
        static_cast<std::size_t>(trials),
        std::vector<double>(static_cast<std::size_t>(H)));
    for (auto& row : m)
        for (auto& v : row) v = 0.75 - 0.15 * rng.chi_squared(5);
    return m;
}

std::vector<std::vector<double>> sample_temp_errors(
    int trials, int H, const std::vector<uncertainty::GaussianModel>& per_slot,
    std::uint64_t seed) {
    require(trials >= 1 && H >= 1, ErrorCode::invalid_argument,
            "trials and horizon must be at least 1");
    require(static_cast<int>(per_slot.size()) == H, ErrorCode::invalid_argument,
            "need one fitted Gaussian per slot, got " +
                std::to_string(per_slot.size()) + " for horizon " +
                std::to_string(H));
    RandomStream rng = RandomStream::named(seed, "temp_errors");
    std::vector<std::vector<double>> m(
        static_cast<std::size_t>(trials),
        std::vector<double>(static_cast<std::size_t>(H)));
    for (auto& row : m)
        for (int t = 0; t < H; ++t) {
            const auto& g = per_slot[static_cast<std::size_t>(t)];
            row[static_cast<std::size_t>(t)] = rng.normal(g.mu, g.sigma);
        }
    return m;
}

double comfort_rate(const std::vector<std::vector<double>>& indoor_by_house,
                    const std::vector<std::pair<double, double>>& bounds) {
    require(!indoor_by_house.empty(), ErrorCode::invalid_argument,
            "no trajectories given");
    require(indoor_by_house.size() == bounds.size(), ErrorCode::invalid_argument,
            "one bounds pair per house required");
    double worst = 1.0;
    for (std::size_t k = 0; k < indoor_by_house.size(); ++k) {
        const auto& traj = indoor_by_house[k];
        require(!traj.empty(), ErrorCode::invalid_argument,
                "empty trajectory for house index " + std::to_string(k));
        const auto [lo, hi] = bounds[k];
        std::size_t inside = 0;
        for (const double T : traj)
            if (T >= lo && T <= hi) ++inside;
        worst = std::min(worst, static_cast<double>(inside) /
                                    static_cast<double>(traj.size()));
    }
    return worst;
}

namespace {

/// One trial's replay: plant simulation per house under the perturbed
/// outdoor trajectory, then transformer loads from the schedule plus the
/// perturbed net load. `x` is indexed like `houses`.
struct TrialMetrics {
    double p_max = 0.0;
    double peak_cost = 0.0;
    double elec_cost = 0.0;
    double comfort = 0.0;
    std::vector<std::vector<double>> indoor; // [house][slot] when retained
};

TrialMetrics replay_trial(const std::vector<std::vector<int>>& x,
                          const std::vector<thermal::HouseSpec>& houses,
                          const std::vector<model::ZoneSpec>& zones,
                          const std::unordered_map<int, std::size_t>& pos,
                          const model::ForecastSet& forecast,
                          const std::vector<double>& temp_err,
                          const std::vector<double>& power_err,
                          const McOptions& options) {
    const int H = forecast.H;
    std::vector<double> T_out(static_cast<std::size_t>(H));
    for (int t = 0; t < H; ++t)
        T_out[static_cast<std::size_t>(t)] =
            forecast.T_out_hat[static_cast<std::size_t>(t)] +
            temp_err[static_cast<std::size_t>(t)];

    TrialMetrics out;
    std::vector<std::vector<double>> indoor(houses.size());
    std::vector<std::pair<double, double>> bounds(houses.size());
    for (std::size_t k = 0; k < houses.size(); ++k) {
        const auto traj = thermal::simulate_fine(houses[k], x[k], T_out,
                                                 forecast.dt,
                                                 options.fine_dt_seconds,
                                                 options.euler);
        auto& slots = indoor[k];
        slots.resize(static_cast<std::size_t>(H));
        for (int t = 0; t < H; ++t)
            slots[static_cast<std::size_t>(t)] =
                traj.T[static_cast<std::size_t>(t + 1) * traj.steps_per_slot];
        bounds[k] = {houses[k].T_lo, houses[k].T_hi};
    }
    out.comfort = comfort_rate(indoor, bounds);
    if (options.keep_trajectories) out.indoor = std::move(indoor);

    for (std::size_t z = 0; z < zones.size(); ++z) {
        double zone_peak = 0.0;
        for (int t = 0; t < H; ++t) {
            const std::size_t ts = static_cast<std::size_t>(t);
            double load = forecast.P_sum_hat[z][ts] + power_err[ts];
            for (const int id : zones[z].houses) {
                const std::size_t k = pos.at(id);
                load += x[k][ts] * houses[k].P_hp;
            }
            zone_peak = std::max(zone_peak, load);
        }
        out.p_max = std::max(out.p_max, zone_peak);
        out.peak_cost += zones[z].psi * zone_peak;
    }

    for (int t = 0; t < H; ++t) {
        const std::size_t ts = static_cast<std::size_t>(t);
        double hp_kw = 0.0;
        for (std::size_t k = 0; k < houses.size(); ++k)
            hp_kw += x[k][ts] * houses[k].P_hp;
        out.elec_cost += forecast.price[ts] * forecast.dt * hp_kw;
    }
    return out;
}

EvaluationReport run_trials(
    const std::vector<thermal::HouseSpec>& houses,
    const std::vector<model::ZoneSpec>& zones,
    const model::ForecastSet& forecast, const ScenarioSet& scenarios,
    const McOptions& options,
    const std::function<std::vector<std::vector<int>>(int trial,
                                                      const std::vector<double>&)>&
        schedule_for) {
    forecast.validate(static_cast<int>(zones.size()));
    scenarios.validate(forecast.H);
    const auto pos = house_positions(houses);
    for (const auto& zone : zones)
        for (const int id : zone.houses)
            require(pos.count(id) == 1, ErrorCode::config,
                    "zone references unknown house id " + std::to_string(id));

    EvaluationReport report;
    report.trials = scenarios.trials;
    const std::size_t n = static_cast<std::size_t>(scenarios.trials);
    report.p_max.resize(n);
    report.peak_cost.resize(n);
    report.elec_cost.resize(n);
    report.comfort.resize(n);
    if (options.keep_trajectories) report.indoor.resize(n);

    auto work = [&](int begin, int end) {
        std::vector<double> T_out(static_cast<std::size_t>(forecast.H));
        for (int i = begin; i < end; ++i) {
            const std::size_t s = static_cast<std::size_t>(i);
            for (int t = 0; t < forecast.H; ++t)
                T_out[static_cast<std::size_t>(t)] =
                    forecast.T_out_hat[static_cast<std::size_t>(t)] +
                    scenarios.temp_errors[s][static_cast<std::size_t>(t)];
            const auto x = schedule_for(i, T_out);
            require(x.size() == houses.size(), ErrorCode::invalid_argument,
                    "schedule must have one row per house");
            for (const auto& row : x)
                require(static_cast<int>(row.size()) == forecast.H,
                        ErrorCode::invalid_argument,
                        "schedule row length must equal the horizon");
            auto metrics =
                replay_trial(x, houses, zones, pos, forecast,
                             scenarios.temp_errors[s], scenarios.power_errors[s],
                             options);
            report.p_max[s] = metrics.p_max;
            report.peak_cost[s] = metrics.peak_cost;
            report.elec_cost[s] = metrics.elec_cost;
            report.comfort[s] = metrics.comfort;
            if (options.keep_trajectories)
                report.indoor[s] = std::move(metrics.indoor);
        }
    };

    const unsigned hw = std::max(1u, options.threads);
    const int workers =
        static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(n)));
    if (workers <= 1) {
        work(0, scenarios.trials);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        const int chunk = (scenarios.trials + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int begin = w * chunk;
            const int end = std::min(scenarios.trials, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(work, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    report.p_max_summary = summarize(report.p_max);
    report.peak_cost_summary = summarize(report.peak_cost);
    report.elec_cost_summary = summarize(report.elec_cost);
    report.comfort_summary = summarize(report.comfort);
    return report;
}

} // namespace

EvaluationReport monte_carlo_evaluate(const std::vector<std::vector<int>>& x,
                                      const std::vector<thermal::HouseSpec>& houses,
                                      const std::vector<model::ZoneSpec>& zones,
                                      const model::ForecastSet& forecast,
                                      const ScenarioSet& scenarios,
                                      const McOptions& options) {
    require(x.size() == houses.size(), ErrorCode::invalid_argument,
            "schedule must have one row per house");
    for (const auto& row : x)
        require(static_cast<int>(row.size()) == forecast.H,
                ErrorCode::invalid_argument,
                "schedule row length must equal the horizon");
    return run_trials(houses, zones, forecast, scenarios, options,
                      [&](int, const std::vector<double>&) { return x; });
}

EvaluationReport monte_carlo_baseline(const std::vector<thermal::HouseSpec>& houses,
                                      const std::vector<model::ZoneSpec>& zones,
                                      const model::ForecastSet& forecast,
                                      const ScenarioSet& scenarios,
                                      const McOptions& options) {
    return run_trials(houses, zones, forecast, scenarios, options,
                      [&](int, const std::vector<double>& T_out) {
                          return hysteresis_baseline(houses, T_out, forecast.dt);
                      });
}

} // namespace hpdro::evaluation
