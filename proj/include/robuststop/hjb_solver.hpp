#pragma once

#include "robuststop/grid.hpp"
#include "robuststop/model.hpp"

#include <cstdint>
#include <vector>

namespace robuststop {

struct SolverOptions {
    double tol_outer = 1e-8;   // sup-norm change threshold for the policy iteration
    double tol_inner = 1e-10;  // sup-norm update threshold for each PSOR pass
    int max_outer = 200;
    int max_inner = 50000;     // PSOR sweep budget per frozen-control solve
    double omega = 1.5;        // relaxation factor in (0,2)
};

/// Discrete value function on a grid together with the realized worst-case
/// controls and solve diagnostics.
struct SolutionField {
    Grid grid;
    int m = 0;
    std::vector<double> values;   // [node*m + regime]
    std::vector<double> q_field;  // frozen controls of the final policy iterate
    int iterations = 0;           // outer (policy) iterations performed
    double max_complementarity_residual = 0.0;  // discrete, over interior nodes
    std::vector<std::uint8_t> boundary_not_stopping;  // per-regime warning flags

    double value(int n, int i) const { return values[static_cast<size_t>(n) * m + i]; }
    double q(int n, int i) const { return q_field[static_cast<size_t>(n) * m + i]; }
};

/// Solves the coupled obstacle problem
///   min{ r v - (b + sigma q*) v' - (1/2) sigma^2 v'' - Qv - f - q*^2/(2 theta),
///        v - g } = 0
/// by policy iteration on the ambiguity control q with projected SOR on each
/// frozen linear complementarity problem. Deterministic for fixed inputs.
/// Throws MaxIterations on an exhausted outer or inner budget.
SolutionField solve(const ProblemSpec& spec, const Grid& grid, const SolverOptions& opts = {});

struct ResidualReport {
    double max_abs_complementarity = 0.0;
    std::vector<std::vector<double>> per_regime;  // [regime][node], 0 at boundary nodes
};

/// Re-evaluates the supremum-form complementarity residual at every interior
/// node with central differences. This is a diagnostic against the continuous
/// operator: for a first-order upwind solution it is O(h * |drift| * |v''| / 2)
/// inside the continuation region, not solver-tolerance small.
ResidualReport residual_report(const ProblemSpec& spec, const SolutionField& sol);

/// Discrete complementarity residual of the scheme itself: upwind drift from
/// the stored q_field, three-point second difference, max over interior nodes.
/// This is the quantity the solver drives below 10 * tol_outer.
double discrete_complementarity_residual(const ProblemSpec& spec, const SolutionField& sol);

}  // namespace robuststop
