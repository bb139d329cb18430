#pragma once

#include "robuststop/hjb_solver.hpp"

#include <optional>
#include <vector>

namespace robuststop {

/// Per-regime continuation/stopping masks and threshold levels.
/// A threshold x_i is reported when the continuation region of regime i is
/// exactly the interval [x_min, x_i); otherwise only the raw mask is kept.
struct StoppingRule {
    double tol_region = 1e-6;
    Grid grid;
    int m = 0;
    std::vector<std::uint8_t> continuation;  // [node*m + regime], true = keep holding
    std::vector<std::optional<double>> thresholds;

    bool in_continuation(int n, int i) const {
        return continuation[static_cast<size_t>(n) * m + i] != 0;
    }
    /// Continuation lookup at an off-grid point via the nearest node.
    bool in_continuation_at(double x, int i) const;
};

/// Masks where v - g > tol_region; thresholds at the first binding node after
/// at least one continuation node (all-stopping regimes report x_min).
StoppingRule classify_regions(const ProblemSpec& spec, const SolutionField& sol,
                              double tol_region = 1e-6);

/// Threshold-type rule built directly from given levels (mask = x < level).
StoppingRule make_threshold_rule(const Grid& grid, const std::vector<double>& thresholds);

/// |V'_- - V'_+| at the threshold node of regime i, one-sided differences from
/// the continuation and stopping sides (3-point where the stencil fits).
/// Throws NoThreshold when the regime has no threshold.
double smooth_fit_gap(const SolutionField& sol, const StoppingRule& rule, int regime);

}  // namespace robuststop
