#include "hpdro/thermal.hpp"

#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>

#include "hpdro/kernels.hpp"

namespace hpdro::thermal {

namespace {

void require_finite(double v, const char* what) {
    require(std::isfinite(v), ErrorCode::invalid_argument,
            std::string(what) + " must be finite, got " + std::to_string(v));
}

} // namespace

void HouseSpec::validate() const {
    auto positive = [&](double v, const char* name) {
        require(std::isfinite(v) && v > 0.0, ErrorCode::config,
                "house " + std::to_string(id) + ": " + name +
                    " must be positive, got " + std::to_string(v));
    };
    positive(R, "R");
    positive(C, "C");
    positive(R_w, "R_w");
    positive(C_w, "C_w");
    positive(P_hp, "P_hp");
    positive(cop, "cop");
    require(std::isfinite(eff_w2h) && eff_w2h > 0.0 && eff_w2h <= 1.0,
            ErrorCode::config,
            "house " + std::to_string(id) + ": eff_w2h must lie in (0,1], got " +
                std::to_string(eff_w2h));
    for (double v : {T0, Tw0, T_lo, T_hi, Tw_lo, Tw_hi})
        require(std::isfinite(v), ErrorCode::config,
                "house " + std::to_string(id) + ": temperatures must be finite");
    require(T_lo < T_hi, ErrorCode::config,
            "house " + std::to_string(id) + ": comfort band empty (T_lo >= T_hi)");
    require(Tw_lo < Tw_hi, ErrorCode::config,
            "house " + std::to_string(id) + ": tank band empty (Tw_lo >= Tw_hi)");
    require(T_lo <= T0 && T0 <= T_hi, ErrorCode::config,
            "house " + std::to_string(id) + ": T0 outside comfort band");
}

StepCoefficients step_coefficients(const HouseSpec& spec, double dt_hours) {
    require(std::isfinite(dt_hours) && dt_hours > 0.0, ErrorCode::invalid_argument,
            "time step must be positive, got " + std::to_string(dt_hours));
    const double a = std::exp(-dt_hours / (spec.R * spec.C));
    const double aw = std::exp(-dt_hours / (spec.R_w * spec.C_w));
    const double rho = spec.eff_w2h * spec.R / spec.R_w;
    StepCoefficients c;
    c.delta = a - (1.0 - a) * rho;
    c.phi = (1.0 - a) * rho;
    c.gamma = 1.0 - a;
    c.delta_w = 1.0 - aw;
    c.phi_w = aw;
    c.lambda_w = spec.R_w * spec.cop * spec.P_hp * (1.0 - aw);
    return c;
}

ThermalState step_thermal(const ThermalState& state, int x, double T_out,
                          const HouseSpec& spec, double dt_hours) {
    spec.validate();
    require_finite(state.T, "indoor temperature");
    require_finite(state.Tw, "tank temperature");
    require_finite(T_out, "outdoor temperature");
    require(x == 0 || x == 1, ErrorCode::invalid_argument,
            "HP state must be 0 or 1, got " + std::to_string(x));
    const StepCoefficients c = step_coefficients(spec, dt_hours);
    ThermalState next;
    next.T = c.delta * state.T + c.phi * state.Tw + c.gamma * T_out;
    next.Tw = c.delta_w * state.T + c.phi_w * state.Tw + c.lambda_w * x;
    return next;
}

AffineThermalMap build_affine_maps(const HouseSpec& spec, int H, double dt_hours) {
    spec.validate();
    require(H >= 1, ErrorCode::invalid_argument,
            "horizon must have at least one slot, got " + std::to_string(H));
    const StepCoefficients c = step_coefficients(spec, dt_hours);
    const std::size_t n = static_cast<std::size_t>(H);

    AffineThermalMap map;
    map.H = H;
    map.dt = dt_hours;
    map.J.assign(n * n, 0.0);
    map.K.assign(n * n, 0.0);
    map.M.assign(n * n, 0.0);
    map.N.assign(n * n, 0.0);
    map.l.assign(n, 0.0);
    map.p.assign(n, 0.0);

    // Running affine representation of the current state:
    //   T  = tx·x + to·T_out + tc,   Tw = wx·x + wo·T_out + wc.
    // Each slot applies the step coefficients to the whole representation,
    // then appends the slot's own input terms; row t of the map is a snapshot
    // taken after slot t. O(H²) and bit-for-bit the step_thermal recursion.
    std::vector<double> tx(n, 0.0), to(n, 0.0), wx(n, 0.0), wo(n, 0.0);
    std::vector<double> ntx(n), nto(n), nwx(n), nwo(n);
    double tc = spec.T0;
    double wc = spec.Tw0;

    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t s = 0; s <= t; ++s) {
            ntx[s] = c.delta * tx[s] + c.phi * wx[s];
            nto[s] = c.delta * to[s] + c.phi * wo[s];
            nwx[s] = c.delta_w * tx[s] + c.phi_w * wx[s];
            nwo[s] = c.delta_w * to[s] + c.phi_w * wo[s];
        }
        nto[t] += c.gamma;     // outdoor air acts on the house during slot t
        nwx[t] += c.lambda_w;  // HP heat lands in the tank during slot t
        const double ntc = c.delta * tc + c.phi * wc;
        const double nwc = c.delta_w * tc + c.phi_w * wc;

        for (std::size_t s = 0; s <= t; ++s) {
            tx[s] = ntx[s];
            to[s] = nto[s];
            wx[s] = nwx[s];
            wo[s] = nwo[s];
            map.J[t * n + s] = tx[s];
            map.K[t * n + s] = to[s];
            map.M[t * n + s] = wx[s];
            map.N[t * n + s] = wo[s];
        }
        tc = ntc;
        wc = nwc;
        map.l[t] = tc;
        map.p[t] = wc;
    }
    return map;
}

namespace {

std::vector<double> apply_affine(const std::vector<double>& A,
                                 const std::vector<double>& B,
                                 const std::vector<double>& offset,
                                 const std::vector<double>& x,
                                 const std::vector<double>& T_out, int H) {
    require(static_cast<int>(x.size()) == H &&
                static_cast<int>(T_out.size()) == H,
            ErrorCode::invalid_argument,
            "schedule and outdoor profile must both have " + std::to_string(H) +
                " entries");
    const std::size_t n = static_cast<std::size_t>(H);
    std::vector<double> out(offset);
    for (std::size_t t = 0; t < n; ++t) {
        // rows are lower triangular; only the first t+1 entries matter
        out[t] += kernels::dot(&A[t * n], x.data(), t + 1) +
                  kernels::dot(&B[t * n], T_out.data(), t + 1);
    }
    return out;
}

} // namespace

std::vector<double> AffineThermalMap::indoor(const std::vector<double>& x,
                                             const std::vector<double>& T_out) const {
    return apply_affine(J, K, l, x, T_out, H);
}

std::vector<double> AffineThermalMap::tank(const std::vector<double>& x,
                                           const std::vector<double>& T_out) const {
    return apply_affine(M, N, p, x, T_out, H);
}

void export_map_csv(const AffineThermalMap& map, std::ostream& out) {
    out << "name,row,col,value\n";
    const std::size_t n = static_cast<std::size_t>(map.H);
    auto block = [&](const char* name, const std::vector<double>& A) {
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t s = 0; s < n; ++s)
                out << name << ',' << r << ',' << s << ',' << A[r * n + s] << '\n';
    };
    auto column = [&](const char* name, const std::vector<double>& v) {
        for (std::size_t r = 0; r < n; ++r)
            out << name << ',' << r << ",0," << v[r] << '\n';
    };
    block("J", map.J);
    block("K", map.K);
    column("l", map.l);
    block("M", map.M);
    block("N", map.N);
    column("p", map.p);
}

FineTrajectory simulate_fine(const HouseSpec& spec, const std::vector<int>& x,
                             const std::vector<double>& T_out,
                             double coarse_dt_hours, double fine_dt_seconds,
                             bool euler) {
    spec.validate();
    require(!x.empty() && x.size() == T_out.size(), ErrorCode::invalid_argument,
            "schedule and outdoor profile must be non-empty and equally long");
    require(fine_dt_seconds > 0.0, ErrorCode::invalid_argument,
            "fine step must be positive");
    const double coarse_s = coarse_dt_hours * 3600.0;
    require(fine_dt_seconds < coarse_s, ErrorCode::invalid_argument,
            "fine step must be shorter than the slot length");
    const double ratio = coarse_s / fine_dt_seconds;
    const int per_slot = static_cast<int>(std::lround(ratio));
    require(std::abs(ratio - per_slot) < 1e-9 * ratio, ErrorCode::invalid_argument,
            "fine step must divide the slot length exactly");

    const double dt_h = fine_dt_seconds / 3600.0;
    const StepCoefficients c = step_coefficients(spec, dt_h);

    FineTrajectory traj;
    traj.steps_per_slot = per_slot;
    traj.fine_dt_hours = dt_h;
    const std::size_t total = x.size() * static_cast<std::size_t>(per_slot);
    traj.T.reserve(total + 1);
    traj.Tw.reserve(total + 1);

    double T = spec.T0;
    double Tw = spec.Tw0;
    traj.T.push_back(T);
    traj.Tw.push_back(Tw);
    for (std::size_t slot = 0; slot < x.size(); ++slot) {
        require(x[slot] == 0 || x[slot] == 1, ErrorCode::invalid_argument,
                "HP state must be 0 or 1 in slot " + std::to_string(slot));
        require_finite(T_out[slot], "outdoor temperature");
        const double xs = x[slot];
        const double to = T_out[slot];
        for (int i = 0; i < per_slot; ++i) {
            double nT, nTw;
            if (euler) {
                nT = T + dt_h / spec.C *
                             ((to - T) / spec.R +
                              spec.eff_w2h * (Tw - T) / spec.R_w);
                nTw = Tw + dt_h / spec.C_w *
                               (xs * spec.cop * spec.P_hp + (T - Tw) / spec.R_w);
            } else {
                nT = c.delta * T + c.phi * Tw + c.gamma * to;
                nTw = c.delta_w * T + c.phi_w * Tw + c.lambda_w * xs;
            }
            T = nT;
            Tw = nTw;
            traj.T.push_back(T);
            traj.Tw.push_back(Tw);
        }
    }
    return traj;
}

} // namespace hpdro::thermal
