#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "hpdro/model.hpp"

namespace hpdro::milp {

struct LpSolution {
    enum class Status { optimal, infeasible, unbounded };

    std::vector<double> values; ///< structural variables, catalogue order
    double objective = 0.0;
    Status status = Status::infeasible;
    long iterations = 0;
};

/// Solves the LP relaxation (binaries relaxed to [0,1]) by a bounded-variable
/// two-phase primal simplex over a dense tableau. Dantzig pricing with a
/// switch to Bland's rule after a run of degenerate pivots, so it cannot
/// cycle. All variable bounds must be finite.
LpSolution solve_lp(const model::MilpInstance& instance);

struct BnbConfig {
    double gap_tol = 0.01; ///< relative MIP gap at which search stops
    double time_limit_s = std::numeric_limits<double>::infinity();
    long node_limit = std::numeric_limits<long>::max();
    enum class Branching { most_fractional, pseudo_cost } branching =
        Branching::most_fractional;
    /// Reserved for interface stability: the search is deterministic and the
    /// seed does not influence it.
    std::uint64_t seed = 0;
    /// Drop rows that interval arithmetic over the variable bounds proves can
    /// never bind (sound: the feasible set is unchanged).
    bool presolve = true;
    /// Receives machine-parsable progress lines ("node=… bound=… gap=…").
    std::function<void(const std::string&)> log;
    /// Receives search diagnostics (heuristic failure reasons, node events).
    std::function<void(const std::string&)> debug_log;
    /// Candidate variable vectors tried as incumbents before the search
    /// (catalogue order; binary entries are rounded, continuous entries
    /// re-derived, infeasible candidates skipped). Useful across a family of
    /// instances that differ only in margins: a schedule feasible under the
    /// widest margins stays feasible under narrower ones, so chaining the
    /// previous solution in guarantees the looser variant never ends with a
    /// worse incumbent than the tighter one.
    std::vector<std::vector<double>> warm_starts;
};

/// Best-first branch-and-bound with depth-first plunging, branching on the
/// most fractional binary (pseudo_cost currently falls back to the same
/// rule). Incumbents come from integral relaxations and from a rounding +
/// hold-rule-repair heuristic run at every node.
model::ScheduleSolution solve_milp(const model::MilpInstance& instance,
                                   const BnbConfig& config = {});

/// Exact optimum by exhaustive enumeration of all binary assignments
/// (≤ 22 binaries), minimizing each continuous variable analytically from
/// the rows it appears in. Test oracle; exponential in the binary count.
model::ScheduleSolution enumerate_small(const model::MilpInstance& instance);

/// Fixed-form MPS with INTORG/INTEND markers for the binaries. Row names are
/// the constraint tags, deterministically shortened to 8 characters (4-char
/// prefix + 4 hex digits of a name hash) where needed.
std::string mps_string(const model::MilpInstance& instance);
void export_mps(const model::MilpInstance& instance, const std::string& path);

} // namespace hpdro::milp
