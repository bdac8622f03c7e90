#pragma once

#include <vector>

#include "hpdro/model.hpp"

namespace hpdro::milp::detail {

/// Reusable dense bounded-variable two-phase simplex. Built once per
/// instance (and row subset); each solve() call re-initializes the working
/// tableau from the pristine copy with the bounds it is given, so
/// branch-and-bound nodes pay one memcpy instead of an allocation.
class NodeLp {
public:
    enum class Result { optimal, infeasible, unbounded, iteration_limit };

    NodeLp(const model::MilpInstance& instance,
           const std::vector<const model::LinearRow*>& rows);

    /// Must outlive solve calls; length = instance.num_vars().
    void set_objective(const std::vector<double>* objective) {
        objective_coeffs_ = objective;
    }

    Result solve(const std::vector<double>& lb, const std::vector<double>& ub);

    /// Re-solves after a bound change, reusing the last optimal basis: a dual
    /// simplex pass restores primal feasibility, a primal pass certifies
    /// optimality. Falls back to a cold solve() when no warm state exists or
    /// the warm path stalls. Within a branch-and-bound dive this replaces a
    /// full from-scratch solve with a handful of pivots.
    Result resolve(const std::vector<double>& lb, const std::vector<double>& ub);

    double objective() const { return objective_; }
    double value(int var) const { return xv_[static_cast<std::size_t>(var)]; }
    std::vector<double> values() const;
    long iterations() const { return iterations_; }

private:
    enum class VarStatus : unsigned char { at_lower, at_upper, basic };

    int entering(bool bland) const;
    void rebuild_cost_row();
    Result optimize();
    Result dual_optimize();
    void pivot_rc(int leave_row, int enter_col);
    void refresh_basics();
    double structural_objective() const;

    // problem shape
    int m_ = 0;       ///< rows
    int ns_ = 0;      ///< structural columns
    int nslack_ = 0;  ///< slack columns (one per inequality row)
    int ncols_ = 0;   ///< columns in use this solve (incl. artificials)
    int cap_cols_ = 0;

    std::vector<double> pristine_; ///< m × (ns + nslack) original matrix
    std::vector<double> rhs0_;     ///< original right-hand sides
    std::vector<int> slack_col_;   ///< per row: slack column or -1
    std::vector<double> slack_sign_;
    std::vector<bool> start_at_upper_; ///< per structural: initial bound side
    const std::vector<double>* objective_coeffs_ = nullptr;

    // working state
    std::vector<double> T_;    ///< m × cap_cols_ tableau (basis-reduced)
    std::vector<double> beta_; ///< basis-reduced rhs
    std::vector<double> zrow_; ///< reduced costs
    std::vector<double> cost_;
    std::vector<double> lb_, ub_;
    std::vector<double> xv_;
    std::vector<VarStatus> stat_;
    std::vector<int> basis_;
    double objective_ = 0.0;
    long iterations_ = 0;
    bool phase_one_ = false;
    bool warm_ready_ = false; ///< last solve ended optimal; basis reusable
};

/// Minimizes each continuous variable subject to the rows, binaries fixed at
/// `values`. Returns false (and reports the first binding tag) if some row
/// cannot be satisfied. Used by enumerate_small and the rounding heuristic.
bool derive_continuous(const model::MilpInstance& instance,
                       const std::vector<const model::LinearRow*>& rows,
                       std::vector<double>& values, std::string* binding_tag);

} // namespace hpdro::milp::detail
