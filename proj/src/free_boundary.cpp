#include "robuststop/free_boundary.hpp"

#include "robuststop/errors.hpp"

#include <algorithm>
#include <cmath>

namespace robuststop {

bool StoppingRule::in_continuation_at(double x, int i) const {
    int n = static_cast<int>(std::lround((x - grid.x_min) / grid.h));
    n = std::clamp(n, 0, grid.n_nodes - 1);
    return in_continuation(n, i);
}

StoppingRule classify_regions(const ProblemSpec& spec, const SolutionField& sol, double tol_region) {
    const int n = sol.grid.n_nodes, m = sol.m;
    StoppingRule rule;
    rule.tol_region = tol_region;
    rule.grid = sol.grid;
    rule.m = m;
    rule.continuation.assign(static_cast<size_t>(n) * m, 0);
    rule.thresholds.assign(m, std::nullopt);

    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < n; ++k) {
            const double gap = sol.value(k, i) - spec.rewards.obstacle(sol.grid.x(k), i);
            rule.continuation[static_cast<size_t>(k) * m + i] = gap > tol_region ? 1 : 0;
        }
        // Threshold-type iff the mask is a (possibly empty) prefix of the grid.
        int first_binding = 0;
        while (first_binding < n && rule.in_continuation(first_binding, i)) ++first_binding;
        bool prefix = true;
        for (int k = first_binding; k < n; ++k)
            if (rule.in_continuation(k, i)) {
                prefix = false;
                break;
            }
        if (prefix && first_binding < n) rule.thresholds[static_cast<size_t>(i)] = sol.grid.x(first_binding);
    }
    return rule;
}

StoppingRule make_threshold_rule(const Grid& grid, const std::vector<double>& thresholds) {
    StoppingRule rule;
    rule.grid = grid;
    rule.m = static_cast<int>(thresholds.size());
    rule.continuation.assign(static_cast<size_t>(grid.n_nodes) * rule.m, 0);
    rule.thresholds.assign(rule.m, std::nullopt);
    for (int i = 0; i < rule.m; ++i) {
        rule.thresholds[static_cast<size_t>(i)] = thresholds[static_cast<size_t>(i)];
        for (int k = 0; k < grid.n_nodes; ++k)
            rule.continuation[static_cast<size_t>(k) * rule.m + i] =
                grid.x(k) < thresholds[static_cast<size_t>(i)] ? 1 : 0;
    }
    return rule;
}

double smooth_fit_gap(const SolutionField& sol, const StoppingRule& rule, int regime) {
    if (!rule.thresholds[static_cast<size_t>(regime)]) throw NoThreshold(regime);
    const double xt = *rule.thresholds[static_cast<size_t>(regime)];
    const Grid& grid = sol.grid;
    const int t = static_cast<int>(std::lround((xt - grid.x_min) / grid.h));
    const int n = grid.n_nodes;
    const double h = grid.h;

    if (t <= 0) return 0.0;  // empty continuation region: obstacle on both sides

    auto v = [&](int k) { return sol.value(k, regime); };
    double left;
    if (t >= 2)
        left = (3.0 * v(t) - 4.0 * v(t - 1) + v(t - 2)) / (2.0 * h);
    else
        left = (v(t) - v(t - 1)) / h;

    double right;
    if (t + 2 <= n - 1)
        right = (-3.0 * v(t) + 4.0 * v(t + 1) - v(t + 2)) / (2.0 * h);
    else if (t + 1 <= n - 1)
        right = (v(t + 1) - v(t)) / h;
    else
        throw NoThreshold(regime);  // boundary coincides with the domain edge

    return std::abs(left - right);
}

}  // namespace robuststop
