#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "hpdro/milp.hpp"
#include "lp_core.hpp"

namespace hpdro::milp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIntTol = 1e-9; ///< how close a relaxed binary must be to 0/1

using model::LinearRow;
using model::MilpInstance;
using model::Relation;
using model::ScheduleSolution;

/// Rows that interval arithmetic over the variable bounds proves can never
/// bind are dropped; the feasible set is untouched, the tableau shrinks.
std::vector<const LinearRow*> select_rows(const MilpInstance& inst,
                                          bool presolve) {
    std::vector<const LinearRow*> rows;
    rows.reserve(inst.rows.size());
    for (const auto& row : inst.rows) {
        if (presolve && row.rel != Relation::eq) {
            double lo = 0.0, hi = 0.0;
            for (const auto& [idx, coeff] : row.terms) {
                const std::size_t s = static_cast<std::size_t>(idx);
                const double a = coeff * inst.var_lower[s];
                const double b = coeff * inst.var_upper[s];
                lo += std::min(a, b);
                hi += std::max(a, b);
            }
            if (row.rel == Relation::le && hi <= row.rhs + 1e-9) continue;
            if (row.rel == Relation::ge && lo >= row.rhs - 1e-9) continue;
        }
        rows.push_back(&row);
    }
    return rows;
}

struct Node {
    double bound = -kInf;
    int depth = 0;
    long seq = 0;
    std::vector<std::pair<int, signed char>> fixings;
};

/// Interval arithmetic over the node bounds; rows no point in the box can
/// satisfy prove the node infeasible without touching the LP. Catches the
/// hold-rule patterns that branching creates constantly during a dive.
bool interval_infeasible(const std::vector<const LinearRow*>& rows,
                         const std::vector<double>& lb,
                         const std::vector<double>& ub) {
    for (const auto* row : rows) {
        double lo = 0.0, hi = 0.0;
        for (const auto& [idx, coeff] : row->terms) {
            const std::size_t s = static_cast<std::size_t>(idx);
            const double a = coeff * lb[s];
            const double b = coeff * ub[s];
            lo += std::min(a, b);
            hi += std::max(a, b);
        }
        switch (row->rel) {
            case Relation::le:
                if (lo > row->rhs + 1e-9) return true;
                break;
            case Relation::ge:
                if (hi < row->rhs - 1e-9) return true;
                break;
            case Relation::eq:
                if (lo > row->rhs + 1e-9 || hi < row->rhs - 1e-9) return true;
                break;
        }
    }
    return false;
}

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;
        return a.seq > b.seq; // FIFO among equal bounds
    }
};

/// Flips x[idx] while keeping the two-slot hold rule intact around it.
bool flip_keeps_hold_rule(const std::vector<double>& v, const MilpInstance& inst,
                          int idx, double newval) {
    const int H = inst.H;
    const int t = idx % H;
    const int k = idx / H;
    auto val = [&](int tt) {
        return tt == t ? newval
                       : v[static_cast<std::size_t>(inst.x_index(k, tt))];
    };
    for (int p = std::max(1, t - 1); p <= std::min(H - 2, t + 1); ++p)
        if (val(p) != val(p - 1) && val(p) != val(p + 1)) return false;
    return true;
}

/// Same check for flipping two slots of one house at once (used to seed or
/// remove a whole length-2 run, which a single flip can never do legally).
bool flip2_keeps_hold_rule(const std::vector<double>& v,
                           const MilpInstance& inst, int idx1, int idx2,
                           double newval) {
    const int H = inst.H;
    const int k = idx1 / H;
    if (idx2 / H != k) return false;
    const int t1 = idx1 % H;
    const int t2 = idx2 % H;
    auto val = [&](int tt) {
        if (tt == t1 || tt == t2) return newval;
        return v[static_cast<std::size_t>(inst.x_index(k, tt))];
    };
    const int lo = std::max(1, std::min(t1, t2) - 1);
    const int hi = std::min(H - 2, std::max(t1, t2) + 1);
    for (int p = lo; p <= hi; ++p)
        if (val(p) != val(p - 1) && val(p) != val(p + 1)) return false;
    return true;
}

/// Greedy repair of the violated pure-binary rows by hold-rule-preserving
/// flips: single slots where a run can grow or shrink, adjacent pairs where
/// a fresh length-2 run must be seeded (or an existing one removed). Returns
/// false when a violated row offers no legal move.
bool repair_rows(const MilpInstance& inst,
                 const std::vector<const LinearRow*>& rows,
                 std::vector<double>& v, std::string* fail_tag) {
    const int H = inst.H;
    for (int sweep = 0; sweep < 40; ++sweep) {
        bool violated = false;
        for (const auto* row : rows) {
            bool pure_binary = true;
            for (const auto& [idx, coeff] : row->terms)
                if (!inst.is_binary[static_cast<std::size_t>(idx)]) {
                    pure_binary = false;
                    break;
                }
            if (!pure_binary) continue;
            for (int guard = 0; guard < 2 * H; ++guard) {
                double lhs = 0.0;
                for (const auto& [idx, coeff] : row->terms)
                    lhs += coeff * v[static_cast<std::size_t>(idx)];
                const bool need_up =
                    row->rel == Relation::ge && lhs < row->rhs - 1e-9;
                const bool need_dn =
                    row->rel == Relation::le && lhs > row->rhs + 1e-9;
                if (!need_up && !need_dn) break;

                auto allows = [&](int idx, double nv) {
                    const std::size_t s = static_cast<std::size_t>(idx);
                    return nv >= inst.var_lower[s] && nv <= inst.var_upper[s];
                };
                // improvement in this row from flipping idx to 1 - v[idx]
                auto improvement = [&](double coeff, double cur) {
                    const double d = coeff * (1.0 - 2.0 * cur);
                    return need_up ? d : -d;
                };

                int pick = -1;
                double pick_gain = 0.0;
                for (const auto& [idx, coeff] : row->terms) {
                    const std::size_t s = static_cast<std::size_t>(idx);
                    const double nv = 1.0 - v[s];
                    const double gain = improvement(coeff, v[s]);
                    if (gain <= 0.0 || !allows(idx, nv)) continue;
                    if (!flip_keeps_hold_rule(v, inst, idx, nv)) continue;
                    if (gain > pick_gain) {
                        pick_gain = gain;
                        pick = idx;
                    }
                }
                if (pick >= 0) {
                    const std::size_t s = static_cast<std::size_t>(pick);
                    v[s] = 1.0 - v[s];
                    violated = true;
                    continue;
                }

                // no single flip is legal: grow, seed, shrink or remove a
                // whole length-2 run by flipping two adjacent slots together
                auto coeff_of = [&](int idx) {
                    double c = 0.0;
                    for (const auto& [i2, c2] : row->terms)
                        if (i2 == idx) c += c2;
                    return c;
                };
                int pick2a = -1, pick2b = -1;
                double pick2_gain = 0.0;
                for (const auto& [idx, coeff] : row->terms) {
                    const std::size_t s = static_cast<std::size_t>(idx);
                    const double nv = 1.0 - v[s];
                    const double gain1 = improvement(coeff, v[s]);
                    if (gain1 <= 0.0 || !allows(idx, nv)) continue;
                    const int t = idx % H;
                    for (const int mate : {idx - 1, idx + 1}) {
                        const int tm = t + (mate - idx);
                        if (tm < 0 || tm >= H) continue;
                        const std::size_t sm = static_cast<std::size_t>(mate);
                        if (v[sm] == nv || !allows(mate, nv)) continue;
                        const double total =
                            gain1 + improvement(coeff_of(mate), v[sm]);
                        if (total <= pick2_gain) continue;
                        if (!flip2_keeps_hold_rule(v, inst, idx, mate, nv))
                            continue;
                        pick2_gain = total;
                        pick2a = idx;
                        pick2b = mate;
                    }
                }
                if (pick2a < 0) {
                    if (fail_tag) *fail_tag = "stuck:" + row->tag;
                    return false;
                }
                const double nv2 = 1.0 - v[static_cast<std::size_t>(pick2a)];
                v[static_cast<std::size_t>(pick2a)] = nv2;
                v[static_cast<std::size_t>(pick2b)] = nv2;
                violated = true;
            }
        }
        if (!violated) return true;
    }
    // the last sweep may have finished clean; verify rather than assume
    for (const auto* row : rows) {
        bool pure_binary = true;
        double lhs = 0.0;
        for (const auto& [idx, coeff] : row->terms) {
            if (!inst.is_binary[static_cast<std::size_t>(idx)]) {
                pure_binary = false;
                break;
            }
            lhs += coeff * v[static_cast<std::size_t>(idx)];
        }
        if (!pure_binary) continue;
        const bool bad =
            (row->rel == Relation::ge && lhs < row->rhs - 1e-9) ||
            (row->rel == Relation::le && lhs > row->rhs + 1e-9);
        if (bad) {
            if (fail_tag) *fail_tag = "sweeps:" + row->tag;
            return false;
        }
    }
    return true;
}

/// Threshold rounding of the relaxation, hold-rule repair by absorbing
/// single-slot runs, then a greedy row repair that flips the highest-impact
/// binary that keeps the hold rule. Returns the full variable vector if it
/// reaches feasibility.
std::optional<std::vector<double>> round_and_repair(
    const MilpInstance& inst, const std::vector<const LinearRow*>& rows,
    const std::vector<double>& relaxed, std::string* why) {
    const int H = inst.H;
    std::vector<double> v(static_cast<std::size_t>(inst.num_vars()), 0.0);
    for (int j = 0; j < inst.num_vars(); ++j) {
        const std::size_t s = static_cast<std::size_t>(j);
        if (inst.is_binary[s])
            v[s] = relaxed[s] >= 0.5 ? 1.0 : 0.0;
    }
    // respect branching fixings carried via bounds is the caller's job; the
    // relaxation already honours them, and rounding preserves integral values

    // mend interior single-slot runs, left to right until stable: a lone ON
    // grows into its right neighbour (dropping it would shed heat and break
    // the comfort rows this schedule was rounded to satisfy), a lone OFF gap
    // is filled
    for (int k = 0; k < inst.N; ++k) {
        for (int pass = 0; pass < H; ++pass) {
            bool changed = false;
            for (int t = 1; t <= H - 2; ++t) {
                const std::size_t c = static_cast<std::size_t>(inst.x_index(k, t));
                const std::size_t l =
                    static_cast<std::size_t>(inst.x_index(k, t - 1));
                const std::size_t r =
                    static_cast<std::size_t>(inst.x_index(k, t + 1));
                if (v[c] != v[l] && v[c] != v[r]) {
                    if (v[c] >= 0.5 &&
                        inst.var_upper[r] >= 1.0) // lone ON: extend right
                        v[r] = 1.0;
                    else
                        v[c] = v[l];
                    changed = true;
                }
            }
            if (!changed) break;
        }
    }

    if (!repair_rows(inst, rows, v, why)) return std::nullopt;
    std::string tag;
    if (!detail::derive_continuous(inst, rows, v, &tag)) {
        if (why) *why = "derive:" + tag;
        return std::nullopt;
    }
    return v;
}

/// Rounds the relaxation house by house along the time axis, keeping each
/// house's running ON count within half a slot of the relaxation's cumulative
/// heat mass and switching only after two-slot dwells. Prefix heat is what
/// the temperature rows integrate, so this lands far closer to feasibility
/// than per-slot thresholding when the relaxation spreads heating thinly.
std::optional<std::vector<double>> cumulative_round(
    const MilpInstance& inst, const std::vector<const LinearRow*>& rows,
    const std::vector<double>& relaxed, std::string* why) {
    const int H = inst.H;
    std::vector<double> v(static_cast<std::size_t>(inst.num_vars()), 0.0);
    for (int k = 0; k < inst.N; ++k) {
        double mass = 0.0;
        int placed = 0;
        bool on = false;
        int run = 2; // an opening switch at the first slot is always legal
        for (int t = 0; t < H; ++t) {
            const std::size_t s = static_cast<std::size_t>(inst.x_index(k, t));
            mass += relaxed[s];
            const double deficit = mass - placed;
            const bool want_on = on ? deficit > -0.5 : deficit > 0.5;
            if (want_on != on && run >= 2) {
                on = want_on;
                run = 0;
            }
            double val = on ? 1.0 : 0.0;
            val = std::min(std::max(val, inst.var_lower[s]), inst.var_upper[s]);
            v[s] = val;
            if ((val >= 0.5) != on) { // clamped by a fixed bound: resync
                on = val >= 0.5;
                run = 0;
            }
            placed += val >= 0.5 ? 1 : 0;
            ++run;
        }
    }
    if (!repair_rows(inst, rows, v, why)) return std::nullopt;
    std::string tag;
    if (!detail::derive_continuous(inst, rows, v, &tag)) {
        if (why) *why = "derive:" + tag;
        return std::nullopt;
    }
    return v;
}

double exact_objective(const MilpInstance& inst, const std::vector<double>& v) {
    double obj = 0.0;
    for (int j = 0; j < inst.num_vars(); ++j)
        obj += inst.objective[static_cast<std::size_t>(j)] *
               v[static_cast<std::size_t>(j)];
    return obj;
}

/// First-improvement local search around a feasible binary point. Moves are
/// hold-rule-preserving within one house: a single flip (grow or shrink a
/// run), an adjacent same-value pair (seed or delete a length-2 run), a swap
/// of two differing slots up to three apart (relocate heating without
/// changing the house's total), and a relocation of one ON slot to any OFF
/// slot with a strictly cheaper objective coefficient (move heating across
/// tariff tiers). Every candidate re-derives the continuous variables, so
/// acceptance is on the exact objective. Stops after a full sweep without
/// improvement.
void polish_schedule(const MilpInstance& inst,
                     const std::vector<const LinearRow*>& rows,
                     std::vector<double>& v, double& obj) {
    const int H = inst.H;
    auto hold_ok = [&](int k, int t1, double nv1, int t2, double nv2) {
        auto val = [&](int tt) -> double {
            if (tt == t1) return nv1;
            if (t2 >= 0 && tt == t2) return nv2;
            return v[static_cast<std::size_t>(inst.x_index(k, tt))];
        };
        const int lo = std::max(1, (t2 >= 0 ? std::min(t1, t2) : t1) - 1);
        const int hi = std::min(H - 2, (t2 >= 0 ? std::max(t1, t2) : t1) + 1);
        for (int p = lo; p <= hi; ++p)
            if (val(p) != val(p - 1) && val(p) != val(p + 1)) return false;
        return true;
    };
    auto in_bounds = [&](int idx, double nv) {
        const std::size_t s = static_cast<std::size_t>(idx);
        return nv >= inst.var_lower[s] && nv <= inst.var_upper[s];
    };
    std::vector<double> cand;
    // t2 < 0 requests a single flip
    auto attempt = [&](int k, int t1, double nv1, int t2, double nv2) {
        const int i1 = inst.x_index(k, t1);
        if (!in_bounds(i1, nv1)) return false;
        const int i2 = t2 >= 0 ? inst.x_index(k, t2) : -1;
        if (i2 >= 0 && !in_bounds(i2, nv2)) return false;
        if (!hold_ok(k, t1, nv1, t2, nv2)) return false;
        cand = v;
        cand[static_cast<std::size_t>(i1)] = nv1;
        if (i2 >= 0) cand[static_cast<std::size_t>(i2)] = nv2;
        if (!detail::derive_continuous(inst, rows, cand, nullptr)) return false;
        const double o = exact_objective(inst, cand);
        if (o >= obj - 1e-9) return false;
        v.swap(cand);
        obj = o;
        return true;
    };
    for (int sweep = 0; sweep < 30; ++sweep) {
        bool moved = false;
        for (int k = 0; k < inst.N; ++k) {
            for (int t = 0; t < H; ++t) {
                const auto xs = [&](int tt) {
                    return v[static_cast<std::size_t>(inst.x_index(k, tt))];
                };
                moved |= attempt(k, t, 1.0 - xs(t), -1, 0.0);
                if (t + 1 < H && xs(t) == xs(t + 1))
                    moved |= attempt(k, t, 1.0 - xs(t), t + 1, 1.0 - xs(t));
                for (int d = 1; d <= 3 && t + d < H; ++d)
                    if (xs(t) != xs(t + d))
                        moved |=
                            attempt(k, t, xs(t + d), t + d, 1.0 - xs(t + d));
                if (xs(t) == 1.0) {
                    const double c1 = inst.objective[static_cast<std::size_t>(
                        inst.x_index(k, t))];
                    for (int u = 0; u < H && xs(t) == 1.0; ++u)
                        if (xs(u) == 0.0 &&
                            inst.objective[static_cast<std::size_t>(
                                inst.x_index(k, u))] < c1 - 1e-9)
                            moved |= attempt(k, t, 0.0, u, 1.0);
                }
            }
        }
        if (!moved) break;
    }
}

void fill_solution_shape(const MilpInstance& inst, ScheduleSolution& sol) {
    if (inst.N * inst.H + inst.Z != inst.num_vars()) return;
    sol.x.assign(static_cast<std::size_t>(inst.N),
                 std::vector<int>(static_cast<std::size_t>(inst.H), 0));
    sol.P_max.assign(static_cast<std::size_t>(inst.Z), 0.0);
    for (int k = 0; k < inst.N; ++k)
        for (int t = 0; t < inst.H; ++t)
            sol.x[static_cast<std::size_t>(k)][static_cast<std::size_t>(t)] =
                sol.raw[static_cast<std::size_t>(inst.x_index(k, t))] >= 0.5 ? 1
                                                                             : 0;
    for (int z = 0; z < inst.Z; ++z)
        sol.P_max[static_cast<std::size_t>(z)] =
            sol.raw[static_cast<std::size_t>(inst.peak_index(z))];
}

std::string progress_line(long nodes, std::size_t open, double bound,
                          double incumbent, double gap) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "node=%ld open=%zu bound=%.9g incumbent=%.9g gap=%.6g", nodes,
                  open, bound, incumbent, gap);
    return buf;
}

} // namespace

ScheduleSolution solve_milp(const MilpInstance& instance,
                            const BnbConfig& config) {
    require(config.gap_tol >= 0.0, ErrorCode::invalid_argument,
            "gap tolerance must be nonnegative");
    const auto t_start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t_start)
            .count();
    };

    const auto rows = select_rows(instance, config.presolve);
    detail::NodeLp lp(instance, rows);
    lp.set_objective(&instance.objective);

    std::vector<double> lb(instance.var_lower);
    std::vector<double> ub(instance.var_upper);

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    std::vector<Node> plunge;
    long seq = 0;
    long nodes = 0;
    double pruned_min = kInf; ///< best bound among gap-pruned nodes

    std::optional<std::vector<double>> incumbent;
    double inc_obj = kInf;

    auto try_incumbent = [&](const std::vector<double>& v) {
        double obj = exact_objective(instance, v);
        if (obj < inc_obj - 1e-12) {
            std::vector<double> refined = v;
            polish_schedule(instance, rows, refined, obj);
            incumbent = std::move(refined);
            inc_obj = obj;
            return true;
        }
        return false;
    };

    auto prune_cut = [&] {
        if (!incumbent) return kInf;
        return inc_obj - config.gap_tol * std::max(std::abs(inc_obj), 1e-10) -
               1e-9;
    };

    for (const auto& cand : config.warm_starts) {
        require(static_cast<int>(cand.size()) == instance.num_vars(),
                ErrorCode::invalid_argument,
                "warm start has " + std::to_string(cand.size()) +
                    " entries, instance has " +
                    std::to_string(instance.num_vars()) + " variables");
        std::vector<double> v(cand);
        for (int j = 0; j < instance.num_vars(); ++j) {
            const std::size_t s = static_cast<std::size_t>(j);
            if (instance.is_binary[s]) v[s] = v[s] >= 0.5 ? 1.0 : 0.0;
        }
        if (!detail::derive_continuous(instance, rows, v, nullptr)) {
            if (config.debug_log) config.debug_log("warm start infeasible");
            continue;
        }
        if (try_incumbent(v) && config.log)
            config.log(progress_line(nodes, 0, -kInf, inc_obj, kInf));
    }

    open.push(Node{-kInf, 0, seq++, {}});

    bool hit_limit = false;
    while (!open.empty() || !plunge.empty()) {
        if (elapsed() > config.time_limit_s || nodes >= config.node_limit) {
            hit_limit = true;
            break;
        }
        Node node;
        if (!plunge.empty()) {
            node = std::move(plunge.back());
            plunge.pop_back();
        } else {
            node = open.top();
            open.pop();
        }
        if (node.bound >= prune_cut()) {
            pruned_min = std::min(pruned_min, node.bound);
            continue;
        }

        // node bounds = instance bounds + this node's fixings
        std::copy(instance.var_lower.begin(), instance.var_lower.end(),
                  lb.begin());
        std::copy(instance.var_upper.begin(), instance.var_upper.end(),
                  ub.begin());
        for (const auto& [var, val] : node.fixings) {
            lb[static_cast<std::size_t>(var)] = val;
            ub[static_cast<std::size_t>(var)] = val;
        }

        ++nodes;
        if (interval_infeasible(rows, lb, ub)) continue;
        auto status = lp.resolve(lb, ub);
        if (status == detail::NodeLp::Result::optimal &&
            std::isfinite(node.bound) &&
            lp.objective() < node.bound - 1e-6 * std::max(std::abs(node.bound), 1.0)) {
            // a child bound can never improve on its parent; a warm basis that
            // claims otherwise has drifted, so recompute from scratch
            status = lp.solve(lb, ub);
        }
        if (status == detail::NodeLp::Result::infeasible) continue;
        require(status == detail::NodeLp::Result::optimal, ErrorCode::numeric,
                "node relaxation did not solve to optimality");
        const double bound = std::max(node.bound, lp.objective());
        if (bound >= prune_cut()) {
            pruned_min = std::min(pruned_min, bound);
            continue;
        }

        // most fractional free binary
        int branch_var = -1;
        double branch_score = kIntTol;
        const auto values = lp.values();
        for (int j = 0; j < instance.num_vars(); ++j) {
            const std::size_t s = static_cast<std::size_t>(j);
            if (!instance.is_binary[s]) continue;
            if (lb[s] >= ub[s]) continue; // fixed at this node
            const double frac =
                std::min(values[s] - std::floor(values[s]),
                         std::ceil(values[s]) - values[s]);
            const double score = std::min(values[s], 1.0 - values[s]);
            if (frac > kIntTol && score > branch_score) {
                branch_score = score;
                branch_var = j;
            }
        }

        if (branch_var < 0) {
            // integral relaxation: snap, re-derive the peaks exactly
            std::vector<double> v(values);
            for (int j = 0; j < instance.num_vars(); ++j)
                if (instance.is_binary[static_cast<std::size_t>(j)])
                    v[static_cast<std::size_t>(j)] =
                        std::round(v[static_cast<std::size_t>(j)]);
            // snapping can only tighten: if even the exact re-derivation
            // finds no feasible continuous completion, discard the node
            // rather than admit a point outside the row tolerances
            if (!detail::derive_continuous(instance, rows, v, nullptr)) {
                pruned_min = std::min(pruned_min, bound);
                continue;
            }
            if (try_incumbent(v) && config.log)
                config.log(progress_line(nodes, open.size() + plunge.size(),
                                         bound, inc_obj,
                                         (inc_obj - bound) /
                                             std::max(std::abs(inc_obj), 1e-12)));
            continue;
        }

        bool improved = false;
        std::string why_cum, why_rnd;
        if (auto rounded = cumulative_round(instance, rows, values, &why_cum))
            improved |= try_incumbent(*rounded);
        if (auto repaired = round_and_repair(instance, rows, values, &why_rnd))
            improved |= try_incumbent(*repaired);
        if (!incumbent && config.debug_log && nodes <= 8)
            config.debug_log("node=" + std::to_string(nodes) +
                             " heuristics failed: cumulative[" + why_cum +
                             "] threshold[" + why_rnd + "]");
        if (improved && config.log)
            config.log(progress_line(nodes, open.size() + plunge.size(), bound,
                                     inc_obj,
                                     (inc_obj - bound) /
                                         std::max(std::abs(inc_obj), 1e-12)));

        const signed char near =
            values[static_cast<std::size_t>(branch_var)] >= 0.5 ? 1 : 0;
        Node first, second;
        first.bound = second.bound = bound;
        first.depth = second.depth = node.depth + 1;
        first.fixings = node.fixings;
        second.fixings = std::move(node.fixings);
        first.fixings.emplace_back(branch_var, near);
        second.fixings.emplace_back(branch_var,
                                    static_cast<signed char>(1 - near));
        first.seq = seq++;
        second.seq = seq++;
        if (!incumbent) {
            // no incumbent yet: keep the far child on the dive stack too, so
            // an infeasible step backtracks in place instead of abandoning
            // the dive for a distant best-bound node
            plunge.push_back(std::move(second));
        } else {
            open.push(std::move(second));
        }
        plunge.push_back(std::move(first)); // dive toward the rounded value

        if (config.log)
            config.log(progress_line(nodes, open.size() + plunge.size(), bound,
                                     incumbent ? inc_obj : kInf,
                                     incumbent
                                         ? (inc_obj - bound) /
                                               std::max(std::abs(inc_obj), 1e-12)
                                         : kInf));
    }

    // lower-bound certificate over everything not explored to completion
    double global_lower = pruned_min;
    while (!open.empty()) {
        global_lower = std::min(global_lower, open.top().bound);
        open.pop();
    }
    for (const auto& n : plunge) global_lower = std::min(global_lower, n.bound);

    ScheduleSolution sol;
    sol.nodes = nodes;
    if (!incumbent) {
        sol.status = hit_limit ? ScheduleSolution::Status::timeout
                               : ScheduleSolution::Status::infeasible;
        return sol;
    }
    sol.raw = std::move(*incumbent);
    sol.objective_value = inc_obj;
    if (global_lower >= inc_obj || global_lower == kInf)
        sol.gap = 0.0;
    else
        sol.gap = (inc_obj - global_lower) / std::max(std::abs(inc_obj), 1e-12);
    sol.status = sol.gap <= 1e-9 ? ScheduleSolution::Status::optimal
                                 : ScheduleSolution::Status::gap_feasible;
    fill_solution_shape(instance, sol);
    return sol;
}

ScheduleSolution enumerate_small(const MilpInstance& instance) {
    std::vector<int> bins;
    for (int j = 0; j < instance.num_vars(); ++j)
        if (instance.is_binary[static_cast<std::size_t>(j)])
            bins.push_back(j);
    require(bins.size() <= 22, ErrorCode::invalid_argument,
            "exhaustive enumeration supports at most 22 binaries, got " +
                std::to_string(bins.size()));

    std::vector<const LinearRow*> rows;
    rows.reserve(instance.rows.size());
    for (const auto& row : instance.rows) rows.push_back(&row);

    ScheduleSolution best;
    best.status = ScheduleSolution::Status::infeasible;
    double best_obj = kInf;
    std::vector<double> v(static_cast<std::size_t>(instance.num_vars()), 0.0);

    const std::uint64_t total = 1ULL << bins.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        bool in_bounds = true;
        for (std::size_t b = 0; b < bins.size(); ++b) {
            const std::size_t s = static_cast<std::size_t>(bins[b]);
            const double val = (mask >> b) & 1 ? 1.0 : 0.0;
            if (val < instance.var_lower[s] || val > instance.var_upper[s]) {
                in_bounds = false;
                break;
            }
            v[s] = val;
        }
        if (!in_bounds) continue;
        if (!detail::derive_continuous(instance, rows, v, nullptr)) continue;
        const double obj = exact_objective(instance, v);
        if (obj < best_obj - 1e-15) {
            best_obj = obj;
            best.raw = v;
        }
    }

    if (best.raw.empty()) return best;
    best.status = ScheduleSolution::Status::optimal;
    best.objective_value = best_obj;
    best.gap = 0.0;
    fill_solution_shape(instance, best);
    return best;
}

} // namespace hpdro::milp
