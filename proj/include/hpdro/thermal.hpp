#pragma once

#include <iosfwd>
#include <vector>

#include "hpdro/errors.hpp"

namespace hpdro::thermal {

/// Static parameters of one house: envelope, hot-water tank, and heat pump.
/// Resistances in °C/kW, capacitances in kWh/°C, P_hp in kW electrical.
struct HouseSpec {
    int id = 0;
    double R = 0.0;       ///< house envelope resistance
    double C = 0.0;       ///< house air capacitance
    double R_w = 0.0;     ///< tank-to-house resistance
    double C_w = 0.0;     ///< tank capacitance
    double P_hp = 0.0;    ///< rated HP electrical power
    double cop = 0.0;     ///< heat delivered to tank per unit electricity
    double eff_w2h = 0.0; ///< water-to-house transfer efficiency, in (0,1]
    double T0 = 0.0;      ///< initial indoor temperature, °C
    double Tw0 = 0.0;     ///< initial tank temperature, °C
    double T_lo = 0.0;    ///< comfort band lower edge
    double T_hi = 0.0;    ///< comfort band upper edge
    double Tw_lo = 0.0;   ///< tank hysteresis lower edge (baseline controller)
    double Tw_hi = 0.0;   ///< tank hysteresis upper edge (baseline controller)

    /// Throws Error(ErrorCode::config) describing the first violated rule.
    void validate() const;
};

struct ThermalState {
    double T = 0.0;  ///< indoor air temperature, °C
    double Tw = 0.0; ///< tank water temperature, °C
};

/// Per-step update coefficients of the exact exponential difference scheme.
///
///   T'  = delta·T + phi·Tw + gamma·T_out
///   Tw' = delta_w·T + phi_w·Tw + lambda_w·x
///
/// The tank exchanges heat only with the indoor air; over one step the house
/// sees the tank coupling as a frozen source, so each row decays with its own
/// time constant (RC for the air node, R_w·C_w for the tank).
struct StepCoefficients {
    double delta, phi, gamma;
    double delta_w, phi_w, lambda_w;
};

StepCoefficients step_coefficients(const HouseSpec& spec, double dt_hours);

/// One step of the coarse scheduler model. dt in hours.
ThermalState step_thermal(const ThermalState& state, int x, double T_out,
                          const HouseSpec& spec, double dt_hours);

/// Affine closed form of H repeated applications of step_thermal:
///
///   T  = J·x + K·T_out + l        (indoor, slot ends 1..H)
///   Tw = M·x + N·T_out + p        (tank,   slot ends 1..H)
///
/// Row r holds the temperature at the end of slot r (time (r+1)·dt); column s
/// holds the input applied during slot s. Causality makes the strict upper
/// triangle zero: the end of slot r cannot see inputs of slots after r.
/// J's main diagonal is also zero — heat reaches the air one slot after the
/// tank. Initial conditions T0, Tw0 live in l and p.
struct AffineThermalMap {
    int H = 0;
    double dt = 0.0;
    std::vector<double> J, K, M, N; ///< row-major H×H
    std::vector<double> l, p;       ///< length H

    std::vector<double> indoor(const std::vector<double>& x,
                               const std::vector<double>& T_out) const;
    std::vector<double> tank(const std::vector<double>& x,
                             const std::vector<double>& T_out) const;
};

AffineThermalMap build_affine_maps(const HouseSpec& spec, int H, double dt_hours);

/// Writes the six blocks as rows "name,row,col,value" for inspection.
void export_map_csv(const AffineThermalMap& map, std::ostream& out);

/// Plant-side reference trajectory at sub-slot resolution. Index 0 is the
/// initial state; indices i·steps_per_slot land on coarse slot boundaries.
struct FineTrajectory {
    std::vector<double> T, Tw;
    int steps_per_slot = 0;
    double fine_dt_hours = 0.0;
};

/// Integrates the RC model at fine_dt_seconds with x and T_out held constant
/// within each coarse slot. Default uses the exact exponential update per
/// fine step; euler switches to forward Euler (for convergence studies).
FineTrajectory simulate_fine(const HouseSpec& spec, const std::vector<int>& x,
                             const std::vector<double>& T_out,
                             double coarse_dt_hours, double fine_dt_seconds,
                             bool euler = false);

} // namespace hpdro::thermal
