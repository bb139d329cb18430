#pragma once

#include "robuststop/hjb_solver.hpp"
#include "robuststop/model.hpp"

#include <utility>
#include <vector>

namespace robuststop {

/// Aggregated stopping problem with one regime per fast block.
struct LimitProblem {
    ProblemSpec spec;            // m = number of blocks, chain = limit generator
    std::vector<int> block_map;  // original state -> block index
};

/// Per-block error norms between an original and a limit solution.
struct ErrorNorms {
    std::vector<double> per_block;
};

/// Block-averaged coefficients weighted by the fast-block stationary
/// distributions: b and f averaged directly, sigma via sigma^2. The obstacle
/// must be regime independent (throws ObstacleRegimeDependent otherwise).
std::pair<CoefficientModel, RewardModel> averaged_coefficients(const TwoTimeScaleSpec& tts,
                                                               const CoefficientModel& coeffs,
                                                               const RewardModel& rewards);

/// Builds the aggregated problem. The original spec's chain must equal
/// assemble_generator(tts) entrywise (throws ChainMismatch otherwise).
LimitProblem build_limit_problem(const ProblemSpec& original, const TwoTimeScaleSpec& tts);

/// N_k = (1/N) sum over nodes n and states l in block k of
/// |V_eps(n, s_kl) - V_limit(n, k)|. Both fields must share the grid.
ErrorNorms error_norms(const SolutionField& sol_eps, const SolutionField& sol_limit,
                       const std::vector<int>& block_map);

}  // namespace robuststop
