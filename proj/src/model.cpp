#include "hpdro/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "hpdro/kernels.hpp"

namespace hpdro::model {

void ZoneSpec::validate() const {
    require(!houses.empty(), ErrorCode::config, "zone has no member houses");
    require(std::isfinite(trans_capacity) && trans_capacity > 0.0,
            ErrorCode::config, "transformer capacity must be positive");
    require(std::isfinite(psi) && psi >= 0.0, ErrorCode::config,
            "peak cost factor must be nonnegative");
}

void ForecastSet::validate(std::size_t zone_count) const {
    require(H >= 1, ErrorCode::config, "forecast horizon must be positive");
    require(std::isfinite(dt) && dt > 0.0, ErrorCode::config,
            "slot length must be positive");
    const std::size_t n = static_cast<std::size_t>(H);
    require(T_out_hat.size() == n, ErrorCode::config,
            "outdoor forecast has " + std::to_string(T_out_hat.size()) +
                " slots, expected " + std::to_string(H));
    require(price.size() == n, ErrorCode::config,
            "price curve has " + std::to_string(price.size()) +
                " slots, expected " + std::to_string(H));
    require(P_sum_hat.size() == zone_count, ErrorCode::config,
            "demand forecast covers " + std::to_string(P_sum_hat.size()) +
                " zones, expected " + std::to_string(zone_count));
    for (const auto& zone_demand : P_sum_hat)
        require(zone_demand.size() == n, ErrorCode::config,
                "zone demand forecast has " + std::to_string(zone_demand.size()) +
                    " slots, expected " + std::to_string(H));
    for (double v : T_out_hat)
        require(std::isfinite(v), ErrorCode::config,
                "outdoor forecast contains a non-finite value");
    for (double v : price)
        require(std::isfinite(v) && v >= 0.0, ErrorCode::config,
                "prices must be finite and nonnegative");
    for (const auto& zone_demand : P_sum_hat)
        for (double v : zone_demand)
            require(std::isfinite(v), ErrorCode::config,
                    "demand forecast contains a non-finite value");
}

Interval empirical_interval(std::vector<double> samples, double coverage) {
    require(samples.size() >= 2, ErrorCode::invalid_argument,
            "interval estimation needs at least 2 samples");
    require(coverage > 0.0 && coverage < 1.0, ErrorCode::invalid_argument,
            "coverage must lie in (0,1)");
    std::sort(samples.begin(), samples.end());
    auto percentile = [&](double q) {
        const double pos = q * static_cast<double>(samples.size() - 1);
        const std::size_t i = static_cast<std::size_t>(pos);
        if (i + 1 >= samples.size()) return samples.back();
        const double frac = pos - static_cast<double>(i);
        return samples[i] * (1.0 - frac) + samples[i + 1] * frac;
    };
    const double tail = (1.0 - coverage) / 2.0;
    return {percentile(tail), percentile(1.0 - tail)};
}

namespace {

/// house id → index into the houses vector; every house in exactly one zone.
std::unordered_map<int, int> index_houses(const std::vector<thermal::HouseSpec>& houses,
                                          const std::vector<ZoneSpec>& zones) {
    require(!houses.empty(), ErrorCode::config, "no houses configured");
    require(!zones.empty(), ErrorCode::config, "no zones configured");
    std::unordered_map<int, int> by_id;
    for (std::size_t k = 0; k < houses.size(); ++k) {
        houses[k].validate();
        const bool fresh = by_id.emplace(houses[k].id, static_cast<int>(k)).second;
        require(fresh, ErrorCode::config,
                "duplicate house id " + std::to_string(houses[k].id));
    }
    std::unordered_map<int, int> zone_of;
    for (std::size_t z = 0; z < zones.size(); ++z) {
        zones[z].validate();
        for (int id : zones[z].houses) {
            require(by_id.count(id), ErrorCode::config,
                    "zone " + std::to_string(z) + " references unknown house id " +
                        std::to_string(id));
            const bool fresh = zone_of.emplace(id, static_cast<int>(z)).second;
            require(fresh, ErrorCode::config,
                    "house id " + std::to_string(id) + " appears in two zones");
        }
    }
    require(zone_of.size() == houses.size(), ErrorCode::config,
            "every house must belong to exactly one zone");
    return by_id;
}

void check_margins(const Margins& margins, int H) {
    const std::size_t n = static_cast<std::size_t>(H);
    require(margins.power.size() == n && margins.temp_up.size() == n &&
                margins.temp_dn.size() == n,
            ErrorCode::invalid_argument,
            "margin vectors must all have " + std::to_string(H) + " slots");
    for (const auto* v : {&margins.power, &margins.temp_up, &margins.temp_dn})
        for (double m : *v)
            require(std::isfinite(m), ErrorCode::invalid_argument,
                    "margins must be finite");
}

std::string slot_tag(const char* family, int a, int t) {
    return std::string(family) + "[k" + std::to_string(a) + ",t" +
           std::to_string(t) + "]";
}

} // namespace

std::vector<double> build_objective(const std::vector<thermal::HouseSpec>& houses,
                                    const std::vector<ZoneSpec>& zones,
                                    const ForecastSet& forecast) {
    index_houses(houses, zones);
    forecast.validate(zones.size());
    const int N = static_cast<int>(houses.size());
    const int H = forecast.H;
    std::vector<double> obj(static_cast<std::size_t>(N) * H + zones.size(), 0.0);
    for (int k = 0; k < N; ++k)
        for (int t = 0; t < H; ++t)
            obj[static_cast<std::size_t>(k) * H + t] =
                forecast.price[static_cast<std::size_t>(t)] * forecast.dt *
                houses[static_cast<std::size_t>(k)].P_hp;
    for (std::size_t z = 0; z < zones.size(); ++z)
        obj[static_cast<std::size_t>(N) * H + z] = zones[z].psi;
    return obj;
}

std::vector<LinearRow> switching_rows(int H) {
    require(H >= 3, ErrorCode::invalid_argument,
            "switching rows need at least 3 slots, got " + std::to_string(H));
    std::vector<LinearRow> rows;
    rows.reserve(2 * static_cast<std::size_t>(H - 2));
    for (int t = 1; t <= H - 2; ++t) {
        LinearRow up;
        up.terms = {{t - 1, -1.0}, {t, 2.0}, {t + 1, -1.0}};
        up.rel = Relation::le;
        up.rhs = 1.0;
        up.tag = "switch[t" + std::to_string(t) + ",up]";
        rows.push_back(std::move(up));
        LinearRow dn;
        dn.terms = {{t - 1, -1.0}, {t, 2.0}, {t + 1, -1.0}};
        dn.rel = Relation::ge;
        dn.rhs = -1.0;
        dn.tag = "switch[t" + std::to_string(t) + ",dn]";
        rows.push_back(std::move(dn));
    }
    return rows;
}

MilpInstance build_with_margins(const std::vector<thermal::HouseSpec>& houses,
                                const std::vector<ZoneSpec>& zones,
                                const ForecastSet& forecast,
                                const Margins& margins,
                                const BuildOptions& options) {
    const auto by_id = index_houses(houses, zones);
    forecast.validate(zones.size());
    const int N = static_cast<int>(houses.size());
    const int Z = static_cast<int>(zones.size());
    const int H = forecast.H;
    const double dt = forecast.dt;
    require(H >= 3, ErrorCode::config,
            "schedule needs at least 3 slots for the switching rule");
    check_margins(margins, H);

    MilpInstance inst;
    inst.N = N;
    inst.H = H;
    inst.Z = Z;
    const std::size_t nvars = static_cast<std::size_t>(inst.num_vars());
    inst.var_names.resize(nvars);
    inst.var_lower.assign(nvars, 0.0);
    inst.var_upper.assign(nvars, 1.0);
    inst.is_binary.assign(nvars, true);
    for (int k = 0; k < N; ++k)
        for (int t = 0; t < H; ++t)
            inst.var_names[static_cast<std::size_t>(inst.x_index(k, t))] =
                "x" + std::to_string(k) + "_" + std::to_string(t);
    for (int z = 0; z < Z; ++z) {
        const std::size_t i = static_cast<std::size_t>(inst.peak_index(z));
        inst.var_names[i] = "peak_z" + std::to_string(z);
        inst.is_binary[i] = false;
        inst.var_lower[i] = 0.0;
        inst.var_upper[i] = zones[static_cast<std::size_t>(z)].trans_capacity;
    }
    inst.objective = build_objective(houses, zones, forecast);

    // Shifted outdoor profiles: warm side for upper comfort rows, cold side
    // for lower comfort and tank-hold rows. This is the only place forecast
    // uncertainty enters, and only right-hand sides depend on it.
    std::vector<double> t_warm(static_cast<std::size_t>(H));
    std::vector<double> t_cold(static_cast<std::size_t>(H));
    for (int t = 0; t < H; ++t) {
        const std::size_t s = static_cast<std::size_t>(t);
        t_warm[s] = forecast.T_out_hat[s] + margins.temp_up[s];
        t_cold[s] = forecast.T_out_hat[s] - margins.temp_dn[s];
    }

    // Peak rows: HP load + forecast demand + margin ≤ peak_z, per zone, slot.
    for (int z = 0; z < Z; ++z) {
        const auto& zone = zones[static_cast<std::size_t>(z)];
        for (int t = 0; t < H; ++t) {
            LinearRow row;
            for (int id : zone.houses) {
                const int k = by_id.at(id);
                row.terms.emplace_back(inst.x_index(k, t),
                                       houses[static_cast<std::size_t>(k)].P_hp);
            }
            row.terms.emplace_back(inst.peak_index(z), -1.0);
            std::sort(row.terms.begin(), row.terms.end());
            row.rel = Relation::le;
            row.rhs = -(forecast.P_sum_hat[static_cast<std::size_t>(z)]
                                          [static_cast<std::size_t>(t)] +
                        margins.power[static_cast<std::size_t>(t)]);
            row.tag = "peak[z" + std::to_string(z) + ",t" + std::to_string(t) + "]";
            inst.rows.push_back(std::move(row));
        }
    }

    // Capacity rows: peak_z ≤ transformer rating (also present as a variable
    // bound; the explicit row keeps the rating visible in exports).
    for (int z = 0; z < Z; ++z) {
        LinearRow row;
        row.terms = {{inst.peak_index(z), 1.0}};
        row.rel = Relation::le;
        row.rhs = zones[static_cast<std::size_t>(z)].trans_capacity;
        row.tag = "capacity[z" + std::to_string(z) + "]";
        inst.rows.push_back(std::move(row));
    }

    // Comfort and tank-hold rows from the affine trajectory maps.
    for (int k = 0; k < N; ++k) {
        const auto& house = houses[static_cast<std::size_t>(k)];
        const auto map = thermal::build_affine_maps(house, H, dt);
        const std::size_t n = static_cast<std::size_t>(H);

        for (int t = 0; t < H; ++t) {
            const std::size_t r = static_cast<std::size_t>(t);
            double k_warm = 0.0, k_cold = 0.0;
            std::vector<std::pair<int, double>> terms;
            terms.reserve(r + 1);
            for (std::size_t s = 0; s <= r; ++s) {
                const double j = map.J[r * n + s];
                if (j != 0.0)
                    terms.emplace_back(inst.x_index(k, static_cast<int>(s)), j);
                k_warm += map.K[r * n + s] * t_warm[s];
                k_cold += map.K[r * n + s] * t_cold[s];
            }

            LinearRow hi;
            hi.terms = terms;
            hi.rel = Relation::le;
            hi.rhs = house.T_hi - map.l[r] - k_warm;
            hi.tag = slot_tag("comfort_hi", k, t);
            inst.rows.push_back(std::move(hi));

            LinearRow lo;
            lo.terms = std::move(terms);
            lo.rel = Relation::ge;
            lo.rhs = house.T_lo - map.l[r] - k_cold;
            lo.tag = slot_tag("comfort_lo", k, t);
            inst.rows.push_back(std::move(lo));
        }

        // End-of-day hold: tank at the final slot at least back to Tw0.
        const std::size_t last = n - 1;
        LinearRow hold;
        double n_cold = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            const double m = map.M[last * n + s];
            if (m != 0.0)
                hold.terms.emplace_back(inst.x_index(k, static_cast<int>(s)), m);
            n_cold += map.N[last * n + s] * t_cold[s];
        }
        hold.rel = Relation::ge;
        hold.rhs = house.Tw0 - map.p[last] - n_cold;
        hold.tag = "tank_hold[k" + std::to_string(k) + "]";
        inst.rows.push_back(std::move(hold));
    }

    // Switching rows per house (local slot indices remapped to the catalogue).
    for (int k = 0; k < N; ++k) {
        for (LinearRow row : switching_rows(H)) {
            for (auto& [idx, coeff] : row.terms) idx = inst.x_index(k, idx);
            row.tag.insert(row.tag.find('[') + 1, "k" + std::to_string(k) + ",");
            inst.rows.push_back(std::move(row));
        }
        if (options.cyclic_switching) {
            // wrap-around slots: (H−1, 0, 1) and (H−2, H−1, 0)
            for (int c = 0; c < 2; ++c) {
                const int prev = c == 0 ? H - 1 : H - 2;
                const int mid = c == 0 ? 0 : H - 1;
                const int next = c == 0 ? 1 : 0;
                for (int dir = 0; dir < 2; ++dir) {
                    LinearRow row;
                    row.terms = {{inst.x_index(k, prev), -1.0},
                                 {inst.x_index(k, mid), 2.0},
                                 {inst.x_index(k, next), -1.0}};
                    std::sort(row.terms.begin(), row.terms.end());
                    row.rel = dir == 0 ? Relation::le : Relation::ge;
                    row.rhs = dir == 0 ? 1.0 : -1.0;
                    row.tag = "switch[k" + std::to_string(k) + ",t" +
                              std::to_string(mid) +
                              (dir == 0 ? ",up,wrap]" : ",dn,wrap]");
                    inst.rows.push_back(std::move(row));
                }
            }
        }
    }

    // Build-time infeasibility screen: heating never cools (J, M ≥ 0), so if
    // x ≡ 1 misses a lower bound, or x ≡ 0 breaches an upper bound, no
    // schedule can satisfy that row.
    for (const auto& row : inst.rows) {
        double lhs_hot = 0.0; // every binary at 1
        for (const auto& [idx, coeff] : row.terms)
            if (inst.is_binary[static_cast<std::size_t>(idx)]) lhs_hot += coeff;
        if (row.rel == Relation::ge && row.tag.rfind("comfort_lo", 0) == 0)
            require(lhs_hot >= row.rhs - 1e-9, ErrorCode::infeasible,
                    "unreachable even at full heating: " + row.tag);
        if (row.rel == Relation::ge && row.tag.rfind("tank_hold", 0) == 0)
            require(lhs_hot >= row.rhs - 1e-9, ErrorCode::infeasible,
                    "unreachable even at full heating: " + row.tag);
        if (row.rel == Relation::le && row.tag.rfind("comfort_hi", 0) == 0)
            require(0.0 <= row.rhs + 1e-9, ErrorCode::infeasible,
                    "breached even with heating off: " + row.tag);
    }

    return inst;
}

MilpInstance build_deterministic(const std::vector<thermal::HouseSpec>& houses,
                                 const std::vector<ZoneSpec>& zones,
                                 const ForecastSet& forecast,
                                 const BuildOptions& options) {
    Margins zero;
    const std::size_t n = static_cast<std::size_t>(forecast.H);
    zero.power.assign(n, 0.0);
    zero.temp_up.assign(n, 0.0);
    zero.temp_dn.assign(n, 0.0);
    return build_with_margins(houses, zones, forecast, zero, options);
}

namespace {

template <typename Model>
void require_per_slot(const std::vector<Model>& models,
                      const std::vector<uncertainty::AmbiguityRadius>& radii,
                      int H, const char* what) {
    require(static_cast<int>(models.size()) == H, ErrorCode::invalid_argument,
            std::string(what) + ": need one fitted model per slot");
    require(static_cast<int>(radii.size()) == H, ErrorCode::invalid_argument,
            std::string(what) + ": need one radius per slot");
}

} // namespace

MilpInstance build_kdea_dro(const std::vector<thermal::HouseSpec>& houses,
                            const std::vector<ZoneSpec>& zones,
                            const ForecastSet& forecast,
                            const std::vector<uncertainty::KdeModel>& power_models,
                            const std::vector<uncertainty::KdeModel>& temp_models,
                            const std::vector<uncertainty::AmbiguityRadius>& power_radii,
                            const std::vector<uncertainty::AmbiguityRadius>& temp_radii,
                            const BuildOptions& options) {
    require_per_slot(power_models, power_radii, forecast.H, "power stream");
    require_per_slot(temp_models, temp_radii, forecast.H, "temperature stream");
    Margins m;
    const std::size_t n = static_cast<std::size_t>(forecast.H);
    m.power.resize(n);
    m.temp_up.resize(n);
    m.temp_dn.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        m.power[t] = uncertainty::g_min_kde(power_models[t], power_radii[t]);
        m.temp_up[t] = uncertainty::g_min_kde(temp_models[t], temp_radii[t]);
        m.temp_dn[t] = options.symmetric_lower_margins
                           ? m.temp_up[t]
                           : uncertainty::g_min_kde(temp_models[t].negated(),
                                                    temp_radii[t]);
    }
    return build_with_margins(houses, zones, forecast, m, options);
}

MilpInstance build_ga_dro(const std::vector<thermal::HouseSpec>& houses,
                          const std::vector<ZoneSpec>& zones,
                          const ForecastSet& forecast,
                          const std::vector<uncertainty::GaussianModel>& power_models,
                          const std::vector<uncertainty::GaussianModel>& temp_models,
                          const std::vector<uncertainty::AmbiguityRadius>& power_radii,
                          const std::vector<uncertainty::AmbiguityRadius>& temp_radii,
                          const BuildOptions& options) {
    require_per_slot(power_models, power_radii, forecast.H, "power stream");
    require_per_slot(temp_models, temp_radii, forecast.H, "temperature stream");
    Margins m;
    const std::size_t n = static_cast<std::size_t>(forecast.H);
    m.power.resize(n);
    m.temp_up.resize(n);
    m.temp_dn.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        m.power[t] = uncertainty::gaussian_margin(power_models[t], power_radii[t]);
        m.temp_up[t] = uncertainty::gaussian_margin(temp_models[t], temp_radii[t]);
        m.temp_dn[t] = options.symmetric_lower_margins
                           ? m.temp_up[t]
                           : uncertainty::gaussian_margin(
                                 temp_models[t].negated(), temp_radii[t]);
    }
    return build_with_margins(houses, zones, forecast, m, options);
}

MilpInstance build_ro(const std::vector<thermal::HouseSpec>& houses,
                      const std::vector<ZoneSpec>& zones,
                      const ForecastSet& forecast,
                      const std::vector<Interval>& power_intervals,
                      const std::vector<Interval>& temp_intervals,
                      const BuildOptions& options) {
    require(static_cast<int>(power_intervals.size()) == forecast.H &&
                static_cast<int>(temp_intervals.size()) == forecast.H,
            ErrorCode::invalid_argument, "need one interval per slot and stream");
    Margins m;
    const std::size_t n = static_cast<std::size_t>(forecast.H);
    m.power.resize(n);
    m.temp_up.resize(n);
    m.temp_dn.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        require(power_intervals[t].lo <= power_intervals[t].hi &&
                    temp_intervals[t].lo <= temp_intervals[t].hi,
                ErrorCode::invalid_argument,
                "empty error interval at slot " + std::to_string(t));
        m.power[t] = power_intervals[t].hi;
        m.temp_up[t] = temp_intervals[t].hi;
        m.temp_dn[t] = options.symmetric_lower_margins ? temp_intervals[t].hi
                                                       : -temp_intervals[t].lo;
    }
    return build_with_margins(houses, zones, forecast, m, options);
}

std::string to_string(ScheduleSolution::Status status) {
    switch (status) {
        case ScheduleSolution::Status::optimal: return "optimal";
        case ScheduleSolution::Status::gap_feasible: return "gap-feasible";
        case ScheduleSolution::Status::infeasible: return "infeasible";
        case ScheduleSolution::Status::timeout: return "timeout";
    }
    return "unknown";
}

ViolationReport validate_schedule(const ScheduleSolution& solution,
                                  const MilpInstance& instance,
                                  double tol) {
    require(solution.raw.size() ==
                static_cast<std::size_t>(instance.num_vars()),
            ErrorCode::invalid_argument,
            "solution has " + std::to_string(solution.raw.size()) +
                " variables, instance expects " +
                std::to_string(instance.num_vars()));
    ViolationReport report;
    for (const auto& row : instance.rows) {
        double lhs = 0.0;
        for (const auto& [idx, coeff] : row.terms)
            lhs += coeff * solution.raw[static_cast<std::size_t>(idx)];
        const double slack = row.rhs - lhs;
        double violation = 0.0;
        switch (row.rel) {
            case Relation::le: violation = std::max(0.0, -slack); break;
            case Relation::ge: violation = std::max(0.0, slack); break;
            case Relation::eq: violation = std::abs(slack); break;
        }
        if (violation > tol)
            report.items.push_back({row.tag, violation, slack});
    }
    return report;
}

} // namespace hpdro::model
