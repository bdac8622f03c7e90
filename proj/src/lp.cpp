#include "lp_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "hpdro/kernels.hpp"
#include "hpdro/milp.hpp"

namespace hpdro::milp {

namespace detail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCostTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-7;
constexpr long kMaxIterations = 200000;
constexpr long kWarmPivotCap = 4000; ///< dual pivots before a cold restart
} // namespace

NodeLp::NodeLp(const model::MilpInstance& instance,
               const std::vector<const model::LinearRow*>& rows) {
    m_ = static_cast<int>(rows.size());
    ns_ = instance.num_vars();
    nslack_ = 0;
    for (const auto* row : rows)
        if (row->rel != model::Relation::eq) ++nslack_;
    cap_cols_ = ns_ + nslack_ + m_; // worst case: artificial in every row

    const std::size_t stride = static_cast<std::size_t>(ns_ + nslack_);
    pristine_.assign(static_cast<std::size_t>(m_) * stride, 0.0);
    rhs0_.resize(static_cast<std::size_t>(m_));
    slack_col_.assign(static_cast<std::size_t>(m_), -1);
    slack_sign_.assign(static_cast<std::size_t>(m_), 0.0);

    int next_slack = ns_;
    for (int i = 0; i < m_; ++i) {
        const auto& row = *rows[static_cast<std::size_t>(i)];
        double* dst = &pristine_[static_cast<std::size_t>(i) * stride];
        for (const auto& [idx, coeff] : row.terms) {
            require(idx >= 0 && idx < ns_, ErrorCode::invalid_argument,
                    "row '" + row.tag + "' references variable " +
                        std::to_string(idx) + " outside the catalogue");
            dst[idx] += coeff;
        }
        rhs0_[static_cast<std::size_t>(i)] = row.rhs;
        if (row.rel != model::Relation::eq) {
            slack_col_[static_cast<std::size_t>(i)] = next_slack;
            slack_sign_[static_cast<std::size_t>(i)] =
                row.rel == model::Relation::le ? 1.0 : -1.0;
            dst[next_slack] = slack_sign_[static_cast<std::size_t>(i)];
            ++next_slack;
        }
    }

    // Initial bound side per structural: binaries at lower keeps the start
    // deterministic; the continuous peak variables start at their upper
    // bound, which keeps the load rows satisfied and saves artificials.
    start_at_upper_.assign(static_cast<std::size_t>(ns_), false);
    for (int j = 0; j < ns_; ++j)
        start_at_upper_[static_cast<std::size_t>(j)] =
            !instance.is_binary[static_cast<std::size_t>(j)];

    T_.assign(static_cast<std::size_t>(m_) * cap_cols_, 0.0);
    beta_.resize(static_cast<std::size_t>(m_));
    zrow_.resize(static_cast<std::size_t>(cap_cols_));
    cost_.resize(static_cast<std::size_t>(cap_cols_));
    lb_.resize(static_cast<std::size_t>(cap_cols_));
    ub_.resize(static_cast<std::size_t>(cap_cols_));
    xv_.resize(static_cast<std::size_t>(cap_cols_));
    stat_.resize(static_cast<std::size_t>(cap_cols_));
    basis_.resize(static_cast<std::size_t>(m_));
}

NodeLp::Result NodeLp::solve(const std::vector<double>& lb,
                             const std::vector<double>& ub) {
    warm_ready_ = false;
    require(static_cast<int>(lb.size()) == ns_ &&
                static_cast<int>(ub.size()) == ns_,
            ErrorCode::invalid_argument, "bound vectors must match catalogue");
    for (int j = 0; j < ns_; ++j)
        require(std::isfinite(lb[static_cast<std::size_t>(j)]) &&
                    std::isfinite(ub[static_cast<std::size_t>(j)]) &&
                    lb[static_cast<std::size_t>(j)] <=
                        ub[static_cast<std::size_t>(j)],
                ErrorCode::invalid_argument,
                "structural variables need finite, ordered bounds");

    // ---- reset working state from the pristine copy ----
    const std::size_t stride = static_cast<std::size_t>(ns_ + nslack_);
    const int base_cols = ns_ + nslack_;
    for (int i = 0; i < m_; ++i) {
        double* dst = &T_[static_cast<std::size_t>(i) * cap_cols_];
        std::memcpy(dst, &pristine_[static_cast<std::size_t>(i) * stride],
                    stride * sizeof(double));
        std::memset(dst + base_cols, 0,
                    static_cast<std::size_t>(cap_cols_ - base_cols) *
                        sizeof(double));
    }
    std::copy(rhs0_.begin(), rhs0_.end(), beta_.begin());
    iterations_ = 0;

    for (int j = 0; j < ns_; ++j) {
        const std::size_t s = static_cast<std::size_t>(j);
        lb_[s] = lb[s];
        ub_[s] = ub[s];
        const bool upper = start_at_upper_[s] && ub_[s] > lb_[s];
        stat_[s] = upper ? VarStatus::at_upper : VarStatus::at_lower;
        xv_[s] = upper ? ub_[s] : lb_[s];
    }
    for (int j = ns_; j < base_cols; ++j) {
        const std::size_t s = static_cast<std::size_t>(j);
        lb_[s] = 0.0;
        ub_[s] = kInf;
        stat_[s] = VarStatus::at_lower;
        xv_[s] = 0.0;
    }

    // residuals with every column nonbasic at its bound
    std::vector<double> residual(beta_);
    for (int j = 0; j < ns_; ++j) {
        const double v = xv_[static_cast<std::size_t>(j)];
        if (v == 0.0) continue;
        for (int i = 0; i < m_; ++i)
            residual[static_cast<std::size_t>(i)] -=
                T_[static_cast<std::size_t>(i) * cap_cols_ + j] * v;
    }

    // pick a basic column per row: the slack when it absorbs the residual
    // with the right sign, otherwise a fresh artificial
    ncols_ = base_cols;
    int artificials = 0;
    for (int i = 0; i < m_; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        const int sc = slack_col_[si];
        if (sc >= 0) {
            const double sval = slack_sign_[si] * residual[si];
            if (sval >= 0.0) {
                basis_[si] = sc;
                stat_[static_cast<std::size_t>(sc)] = VarStatus::basic;
                xv_[static_cast<std::size_t>(sc)] = sval;
                continue;
            }
        }
        const int ac = ncols_++;
        ++artificials;
        const double sign = residual[si] >= 0.0 ? 1.0 : -1.0;
        T_[si * cap_cols_ + ac] = sign;
        lb_[static_cast<std::size_t>(ac)] = 0.0;
        ub_[static_cast<std::size_t>(ac)] = kInf;
        basis_[si] = ac;
        stat_[static_cast<std::size_t>(ac)] = VarStatus::basic;
        xv_[static_cast<std::size_t>(ac)] = std::abs(residual[si]);
    }

    // normalize each row so its basic column has coefficient +1, making the
    // starting tableau exactly the basis-reduced system the pivots maintain
    for (int i = 0; i < m_; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        double* row = &T_[si * cap_cols_];
        if (row[basis_[si]] < 0.0) {
            kernels::scale(-1.0, row, static_cast<std::size_t>(ncols_));
            beta_[si] = -beta_[si];
        }
    }

    // ---- phase 1: drive the artificial infeasibility to zero ----
    if (artificials > 0) {
        std::fill(cost_.begin(), cost_.begin() + ncols_, 0.0);
        for (int j = base_cols; j < ncols_; ++j)
            cost_[static_cast<std::size_t>(j)] = 1.0;
        phase_one_ = true;
        rebuild_cost_row();
        const Result r1 = optimize();
        if (r1 == Result::iteration_limit) return r1;
        refresh_basics();
        double infeas = 0.0;
        for (int j = base_cols; j < ncols_; ++j)
            infeas += std::abs(xv_[static_cast<std::size_t>(j)]);
        if (infeas > kFeasTol) return Result::infeasible;
        // freeze artificials so phase 2 cannot revive them
        for (int j = base_cols; j < ncols_; ++j) {
            lb_[static_cast<std::size_t>(j)] = 0.0;
            ub_[static_cast<std::size_t>(j)] = 0.0;
            xv_[static_cast<std::size_t>(j)] = 0.0;
        }
    }

    // ---- phase 2: the real objective ----
    std::fill(cost_.begin(), cost_.begin() + ncols_, 0.0);
    if (objective_coeffs_) {
        require(static_cast<int>(objective_coeffs_->size()) == ns_,
                ErrorCode::invalid_argument,
                "objective vector must match catalogue");
        std::copy(objective_coeffs_->begin(), objective_coeffs_->end(),
                  cost_.begin());
    }
    phase_one_ = false;
    rebuild_cost_row();
    const Result r2 = optimize();
    if (r2 != Result::optimal) return r2;
    refresh_basics();

    objective_ = structural_objective();
    warm_ready_ = true;
    return Result::optimal;
}

NodeLp::Result NodeLp::resolve(const std::vector<double>& lb,
                               const std::vector<double>& ub) {
    if (!warm_ready_) return solve(lb, ub);
    require(static_cast<int>(lb.size()) == ns_ &&
                static_cast<int>(ub.size()) == ns_,
            ErrorCode::invalid_argument, "bound vectors must match catalogue");

    for (int j = 0; j < ns_; ++j) {
        const std::size_t s = static_cast<std::size_t>(j);
        lb_[s] = lb[s];
        ub_[s] = ub[s];
        if (stat_[s] == VarStatus::basic) continue;
        if (lb_[s] >= ub_[s]) {
            stat_[s] = VarStatus::at_lower;
            xv_[s] = lb_[s];
        } else {
            xv_[s] = stat_[s] == VarStatus::at_lower ? lb_[s] : ub_[s];
        }
    }
    iterations_ = 0;
    refresh_basics();

    // dual pass repairs the basic variables the new bounds pushed outside
    // their range; it may stall after a long jump across the tree, and its
    // infeasibility verdict rests on a tableau that has accumulated rank-one
    // updates without refactorization, so both outcomes are re-derived from
    // the pristine data before anyone acts on them
    const Result rd = dual_optimize();
    if (rd != Result::optimal) return solve(lb, ub);

    // primal pass certifies optimality (and covers relaxed bounds, which can
    // leave a nonbasic variable with the wrong reduced-cost sign)
    const Result rp = optimize();
    if (rp != Result::optimal) return solve(lb, ub);
    refresh_basics();
    objective_ = structural_objective();
    return Result::optimal;
}

double NodeLp::structural_objective() const {
    double obj = 0.0;
    for (int j = 0; j < ns_; ++j)
        obj +=
            cost_[static_cast<std::size_t>(j)] * xv_[static_cast<std::size_t>(j)];
    return obj;
}

std::vector<double> NodeLp::values() const {
    return {xv_.begin(), xv_.begin() + ns_};
}

void NodeLp::rebuild_cost_row() {
    std::copy(cost_.begin(), cost_.begin() + ncols_, zrow_.begin());
    for (int i = 0; i < m_; ++i) {
        const double cb = cost_[static_cast<std::size_t>(basis_[i])];
        if (cb != 0.0)
            kernels::axpy(-cb, &T_[static_cast<std::size_t>(i) * cap_cols_],
                          zrow_.data(), static_cast<std::size_t>(ncols_));
    }
}

int NodeLp::entering(bool bland) const {
    int best = -1;
    double best_viol = kCostTol;
    for (int j = 0; j < ncols_; ++j) {
        const std::size_t s = static_cast<std::size_t>(j);
        if (stat_[s] == VarStatus::basic) continue;
        if (lb_[s] >= ub_[s]) continue; // fixed (or frozen artificial)
        const double viol =
            stat_[s] == VarStatus::at_lower ? -zrow_[s] : zrow_[s];
        if (viol > best_viol) {
            if (bland) return j;
            best_viol = viol;
            best = j;
        }
    }
    return best;
}

NodeLp::Result NodeLp::optimize() {
    bool bland = false;
    int degenerate_run = 0;
    while (true) {
        if (++iterations_ > kMaxIterations) return Result::iteration_limit;
        const int e = entering(bland);
        if (e < 0) return Result::optimal;
        const std::size_t se = static_cast<std::size_t>(e);
        const double sigma = stat_[se] == VarStatus::at_lower ? 1.0 : -1.0;

        // ratio test: how far can the entering variable move before it hits
        // its own other bound or drives a basic variable to one of its bounds
        double delta = ub_[se] - lb_[se];
        int leave_row = -1;
        double leave_pivot = 0.0;
        for (int i = 0; i < m_; ++i) {
            const double a = T_[static_cast<std::size_t>(i) * cap_cols_ + e];
            if (std::abs(a) <= kPivotTol) continue;
            const double g = sigma * a;
            const int bi = basis_[static_cast<std::size_t>(i)];
            const std::size_t sb = static_cast<std::size_t>(bi);
            double room;
            if (g > 0.0)
                room = (xv_[sb] - lb_[sb]) / g;
            else
                room = ub_[sb] >= kInf ? kInf : (ub_[sb] - xv_[sb]) / (-g);
            if (room < 0.0) room = 0.0;
            if (room < delta - 1e-12) {
                delta = room;
                leave_row = i;
                leave_pivot = a;
            } else if (room <= delta + 1e-12 && leave_row >= 0) {
                // tie between leaving candidates: Bland takes the smallest
                // variable index, otherwise prefer the larger pivot
                const int cur = basis_[static_cast<std::size_t>(leave_row)];
                const bool take = bland ? bi < cur
                                        : std::abs(a) > std::abs(leave_pivot);
                if (take) {
                    delta = std::min(delta, room);
                    leave_row = i;
                    leave_pivot = a;
                }
            }
        }

        if (delta >= kInf) return Result::unbounded;

        if (delta <= 1e-11) {
            if (++degenerate_run > 60) bland = true; // anti-cycling fallback
        } else {
            degenerate_run = 0;
        }

        // move the entering variable by delta, shifting all basic values
        if (delta > 0.0) {
            for (int i = 0; i < m_; ++i) {
                const double a = T_[static_cast<std::size_t>(i) * cap_cols_ + e];
                if (a != 0.0)
                    xv_[static_cast<std::size_t>(
                        basis_[static_cast<std::size_t>(i)])] -=
                        sigma * delta * a;
            }
        }

        if (leave_row < 0) {
            // bound flip: crossed to the other bound, basis unchanged
            stat_[se] = stat_[se] == VarStatus::at_lower ? VarStatus::at_upper
                                                         : VarStatus::at_lower;
            xv_[se] = stat_[se] == VarStatus::at_lower ? lb_[se] : ub_[se];
            continue;
        }

        const std::size_t sr = static_cast<std::size_t>(leave_row);
        const int lv = basis_[sr];
        const std::size_t sl = static_cast<std::size_t>(lv);
        const double g = sigma * leave_pivot;
        stat_[sl] = g > 0.0 ? VarStatus::at_lower : VarStatus::at_upper;
        xv_[sl] = g > 0.0 ? lb_[sl] : ub_[sl];
        xv_[se] = (sigma > 0.0 ? lb_[se] : ub_[se]) + sigma * delta;
        if (phase_one_ && lv >= ns_ + nslack_) {
            // an artificial that leaves the basis is never allowed back
            lb_[sl] = ub_[sl] = 0.0;
        }

        pivot_rc(leave_row, e);
    }
}

NodeLp::Result NodeLp::dual_optimize() {
    bool bland = false;
    int degenerate_run = 0;
    long pivots = 0;
    while (true) {
        if (++iterations_ > kMaxIterations) return Result::iteration_limit;
        if (++pivots > kWarmPivotCap) return Result::iteration_limit;

        // leaving row: the basic variable furthest outside its bounds
        int leave_row = -1;
        bool to_lower = false;
        double worst = kFeasTol;
        for (int i = 0; i < m_; ++i) {
            const std::size_t sb =
                static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)]);
            const double below = lb_[sb] - xv_[sb];
            const double above = xv_[sb] - ub_[sb];
            const double viol = std::max(below, above);
            if (viol > worst) {
                worst = viol;
                leave_row = i;
                to_lower = below >= above;
                if (bland) break; // first violated row, smallest index
            }
        }
        if (leave_row < 0) return Result::optimal;

        const std::size_t sr = static_cast<std::size_t>(leave_row);
        const double* prow = &T_[sr * cap_cols_];

        // entering column: tightest dual ratio among the columns that can
        // move the leaving variable back toward its violated bound
        int e = -1;
        double best_ratio = 0.0;
        double best_abs = 0.0;
        for (int j = 0; j < ncols_; ++j) {
            const std::size_t s = static_cast<std::size_t>(j);
            if (stat_[s] == VarStatus::basic) continue;
            if (lb_[s] >= ub_[s]) continue; // fixed (or frozen artificial)
            const double a = prow[j];
            if (std::abs(a) <= kPivotTol) continue;
            const bool low = stat_[s] == VarStatus::at_lower;
            const bool ok = to_lower ? (low ? a < 0.0 : a > 0.0)
                                     : (low ? a > 0.0 : a < 0.0);
            if (!ok) continue;
            const double ratio = zrow_[s] / a;
            bool take;
            if (e < 0) {
                take = true;
            } else if (bland) {
                take = false; // first admissible column, smallest index
            } else if (to_lower ? ratio > best_ratio + 1e-12
                                : ratio < best_ratio - 1e-12) {
                take = true; // strictly tighter dual ratio
            } else if (to_lower ? ratio >= best_ratio - 1e-12
                                : ratio <= best_ratio + 1e-12) {
                take = std::abs(a) > best_abs; // tie: larger pivot
            } else {
                take = false;
            }
            if (take) {
                e = j;
                best_ratio = ratio;
                best_abs = std::abs(a);
            }
        }
        if (e < 0) {
            // the violated row cannot be repaired by any admissible column:
            // its basic variable is already at its box-extreme value
            return Result::infeasible;
        }

        const std::size_t se = static_cast<std::size_t>(e);
        const int lv = basis_[sr];
        const std::size_t sl = static_cast<std::size_t>(lv);
        const double target = to_lower ? lb_[sl] : ub_[sl];
        const double step_l = target - xv_[sl];
        const double step_e = -step_l / prow[e];
        if (std::abs(step_l) <= 1e-11) {
            if (++degenerate_run > 60) bland = true; // anti-cycling fallback
        } else {
            degenerate_run = 0;
        }

        if (step_e != 0.0) {
            for (int i = 0; i < m_; ++i) {
                if (i == leave_row) continue;
                const double a = T_[static_cast<std::size_t>(i) * cap_cols_ + e];
                if (a != 0.0)
                    xv_[static_cast<std::size_t>(
                        basis_[static_cast<std::size_t>(i)])] -= a * step_e;
            }
        }
        xv_[se] += step_e;
        xv_[sl] = target;
        stat_[sl] = to_lower ? VarStatus::at_lower : VarStatus::at_upper;

        pivot_rc(leave_row, e);
    }
}

void NodeLp::pivot_rc(int leave_row, int enter_col) {
    const std::size_t sr = static_cast<std::size_t>(leave_row);
    const std::size_t se = static_cast<std::size_t>(enter_col);

    // eliminate the entering column from every other row and the cost row
    double* prow = &T_[sr * cap_cols_];
    const double inv = 1.0 / prow[enter_col];
    kernels::scale(inv, prow, static_cast<std::size_t>(ncols_));
    prow[enter_col] = 1.0;
    beta_[sr] *= inv;
    for (int i = 0; i < m_; ++i) {
        if (i == leave_row) continue;
        double* row = &T_[static_cast<std::size_t>(i) * cap_cols_];
        const double c = row[enter_col];
        if (c == 0.0) continue;
        kernels::axpy(-c, prow, row, static_cast<std::size_t>(ncols_));
        row[enter_col] = 0.0;
        beta_[static_cast<std::size_t>(i)] -= c * beta_[sr];
    }
    const double zc = zrow_[se];
    if (zc != 0.0) {
        kernels::axpy(-zc, prow, zrow_.data(), static_cast<std::size_t>(ncols_));
        zrow_[se] = 0.0;
    }

    basis_[sr] = enter_col;
    stat_[se] = VarStatus::basic;
}

void NodeLp::refresh_basics() {
    // x_B = B⁻¹b − Σ_{nonbasic j} (B⁻¹A)_j · x_j, recomputed to clear the
    // drift the incremental updates accumulate over many pivots
    std::vector<double> acc(beta_);
    for (int j = 0; j < ncols_; ++j) {
        const std::size_t s = static_cast<std::size_t>(j);
        if (stat_[s] == VarStatus::basic) continue;
        const double v = xv_[s];
        if (v == 0.0) continue;
        for (int i = 0; i < m_; ++i)
            acc[static_cast<std::size_t>(i)] -=
                T_[static_cast<std::size_t>(i) * cap_cols_ + j] * v;
    }
    for (int i = 0; i < m_; ++i)
        xv_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] =
            acc[static_cast<std::size_t>(i)];
}

bool derive_continuous(const model::MilpInstance& instance,
                       const std::vector<const model::LinearRow*>& rows,
                       std::vector<double>& values, std::string* binding_tag) {
    const int nv = instance.num_vars();
    std::vector<double> lo(static_cast<std::size_t>(nv));
    std::vector<double> hi(static_cast<std::size_t>(nv));
    for (int j = 0; j < nv; ++j) {
        lo[static_cast<std::size_t>(j)] =
            instance.var_lower[static_cast<std::size_t>(j)];
        hi[static_cast<std::size_t>(j)] =
            instance.var_upper[static_cast<std::size_t>(j)];
    }

    for (const auto* row : rows) {
        double fixed = 0.0;
        int cont_var = -1;
        double cont_coeff = 0.0;
        bool multi = false;
        for (const auto& [idx, coeff] : row->terms) {
            if (instance.is_binary[static_cast<std::size_t>(idx)]) {
                fixed += coeff * values[static_cast<std::size_t>(idx)];
            } else if (cont_var < 0 || cont_var == idx) {
                cont_var = idx;
                cont_coeff += coeff;
            } else {
                multi = true;
            }
        }
        require(!multi, ErrorCode::invalid_argument,
                "row '" + row->tag +
                    "' couples two continuous variables; analytic peak "
                    "derivation only supports one per row");
        if (cont_var < 0 || cont_coeff == 0.0) {
            const double lhs = fixed;
            const bool ok =
                row->rel == model::Relation::le ? lhs <= row->rhs + 1e-9
                : row->rel == model::Relation::ge
                    ? lhs >= row->rhs - 1e-9
                    : std::abs(lhs - row->rhs) <= 1e-9;
            if (!ok) {
                if (binding_tag) *binding_tag = row->tag;
                return false;
            }
            continue;
        }
        const std::size_t cv = static_cast<std::size_t>(cont_var);
        const double bound = (row->rhs - fixed) / cont_coeff;
        switch (row->rel) {
            case model::Relation::le:
                if (cont_coeff > 0.0)
                    hi[cv] = std::min(hi[cv], bound);
                else
                    lo[cv] = std::max(lo[cv], bound);
                break;
            case model::Relation::ge:
                if (cont_coeff > 0.0)
                    lo[cv] = std::max(lo[cv], bound);
                else
                    hi[cv] = std::min(hi[cv], bound);
                break;
            case model::Relation::eq:
                lo[cv] = std::max(lo[cv], bound);
                hi[cv] = std::min(hi[cv], bound);
                break;
        }
        if (lo[cv] > hi[cv] + 1e-9) {
            if (binding_tag) *binding_tag = row->tag;
            return false;
        }
    }

    for (int j = 0; j < nv; ++j) {
        const std::size_t s = static_cast<std::size_t>(j);
        if (instance.is_binary[s]) continue;
        // peak prices ψ are nonnegative, so the cheapest feasible value of a
        // continuous variable is its derived lower bound
        values[s] = lo[s];
    }
    return true;
}

} // namespace detail

LpSolution solve_lp(const model::MilpInstance& instance) {
    std::vector<const model::LinearRow*> rows;
    rows.reserve(instance.rows.size());
    for (const auto& row : instance.rows) rows.push_back(&row);
    detail::NodeLp lp(instance, rows);
    lp.set_objective(&instance.objective);
    const auto result = lp.solve(instance.var_lower, instance.var_upper);
    LpSolution out;
    out.iterations = lp.iterations();
    switch (result) {
        case detail::NodeLp::Result::optimal:
            out.status = LpSolution::Status::optimal;
            out.values = lp.values();
            out.objective = lp.objective();
            break;
        case detail::NodeLp::Result::infeasible:
            out.status = LpSolution::Status::infeasible;
            break;
        case detail::NodeLp::Result::unbounded:
            out.status = LpSolution::Status::unbounded;
            break;
        case detail::NodeLp::Result::iteration_limit:
            throw Error(ErrorCode::numeric,
                        "simplex iteration limit reached; the instance is "
                        "numerically pathological");
    }
    return out;
}

} // namespace hpdro::milp
