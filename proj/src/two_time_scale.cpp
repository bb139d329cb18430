#include "robuststop/two_time_scale.hpp"

#include "robuststop/errors.hpp"

#include <cmath>

namespace robuststop {

namespace {

// Per-block weighted average of a per-regime coefficient vector; squares
// first when averaging volatilities.
std::vector<double> average_coef(const TwoTimeScaleSpec& tts, const std::vector<ProbVector>& nus,
                                 const std::vector<double>& coef, bool square) {
    const int L = tts.num_blocks();
    std::vector<double> out(L, 0.0);
    for (int k = 0; k < L; ++k) {
        const int off = tts.block_offset(k);
        double acc = 0.0;
        for (int r = 0; r < tts.fast_blocks[static_cast<size_t>(k)].m; ++r) {
            const double c = coef[static_cast<size_t>(off + r)];
            acc += nus[static_cast<size_t>(k)].weights[static_cast<size_t>(r)] * (square ? c * c : c);
        }
        out[static_cast<size_t>(k)] = square ? std::sqrt(acc) : acc;
    }
    return out;
}

ScalarField average_field(const TwoTimeScaleSpec& tts, const std::vector<ProbVector>& nus,
                          const ScalarField& f, bool square) {
    if (f.regime_independent()) return f;
    switch (f.kind) {
        case ScalarField::Kind::Zero:
        case ScalarField::Kind::CallObstacle: return f;
        case ScalarField::Kind::Constant: return ScalarField::constant(average_coef(tts, nus, f.coef, square));
        case ScalarField::Kind::Linear: return ScalarField::linear(average_coef(tts, nus, f.coef, square));
        case ScalarField::Kind::Tabulated: {
            const int L = tts.num_blocks();
            std::vector<std::vector<double>> table(static_cast<size_t>(L),
                                                   std::vector<double>(f.xs.size(), 0.0));
            for (int k = 0; k < L; ++k) {
                const int off = tts.block_offset(k);
                for (int r = 0; r < tts.fast_blocks[static_cast<size_t>(k)].m; ++r) {
                    const double w = nus[static_cast<size_t>(k)].weights[static_cast<size_t>(r)];
                    const auto& row = f.table[static_cast<size_t>(off + r)];
                    for (size_t n = 0; n < row.size(); ++n)
                        table[static_cast<size_t>(k)][n] += w * (square ? row[n] * row[n] : row[n]);
                }
                if (square)
                    for (double& t : table[static_cast<size_t>(k)]) t = std::sqrt(t);
            }
            return ScalarField::tabulated(f.xs, std::move(table));
        }
    }
    return f;
}

}  // namespace

std::pair<CoefficientModel, RewardModel> averaged_coefficients(const TwoTimeScaleSpec& tts,
                                                               const CoefficientModel& coeffs,
                                                               const RewardModel& rewards) {
    if (!rewards.obstacle.regime_independent()) throw ObstacleRegimeDependent();
    std::vector<ProbVector> nus;
    nus.reserve(tts.fast_blocks.size());
    for (const auto& blk : tts.fast_blocks) nus.push_back(stationary_distribution(blk));

    CoefficientModel avg_coeffs{average_field(tts, nus, coeffs.b, false),
                                average_field(tts, nus, coeffs.sigma, true)};
    RewardModel avg_rewards{average_field(tts, nus, rewards.running, false), rewards.obstacle};
    return {std::move(avg_coeffs), std::move(avg_rewards)};
}

LimitProblem build_limit_problem(const ProblemSpec& original, const TwoTimeScaleSpec& tts) {
    const Generator assembled = assemble_generator(tts);
    if (assembled.m != original.chain.m)
        throw ChainMismatch("size " + std::to_string(original.chain.m) + " vs " +
                            std::to_string(assembled.m));
    for (int i = 0; i < assembled.m; ++i)
        for (int j = 0; j < assembled.m; ++j)
            if (std::abs(assembled.rate(i, j) - original.chain.rate(i, j)) > 1e-12)
                throw ChainMismatch("entry (" + std::to_string(i) + "," + std::to_string(j) + ")");

    auto [avg_coeffs, avg_rewards] = averaged_coefficients(tts, original.dynamics, original.rewards);

    LimitProblem limit;
    limit.spec.regimes = tts.num_blocks();
    limit.spec.chain = limit_generator(tts);
    limit.spec.dynamics = std::move(avg_coeffs);
    limit.spec.rewards = std::move(avg_rewards);
    limit.spec.discount = original.discount;
    limit.spec.theta = original.theta;
    limit.spec.q_max = original.q_max;
    limit.spec.x_min = original.x_min;
    limit.spec.x_max = original.x_max;
    validate_problem(limit.spec);

    limit.block_map.resize(static_cast<size_t>(original.chain.m));
    for (int s = 0; s < original.chain.m; ++s) limit.block_map[static_cast<size_t>(s)] = tts.block_of(s);
    return limit;
}

ErrorNorms error_norms(const SolutionField& sol_eps, const SolutionField& sol_limit,
                       const std::vector<int>& block_map) {
    if (!sol_eps.grid.same_as(sol_limit.grid))
        throw GridMismatch("original and limit solutions use different grids");
    if (static_cast<int>(block_map.size()) != sol_eps.m)
        throw ValidationError("block map size does not match the original regime count");

    ErrorNorms norms;
    norms.per_block.assign(static_cast<size_t>(sol_limit.m), 0.0);
    const int n = sol_eps.grid.n_nodes;
    for (int s = 0; s < sol_eps.m; ++s) {
        const int k = block_map[static_cast<size_t>(s)];
        if (k < 0 || k >= sol_limit.m) throw ValidationError("block map entry out of range");
        double acc = 0.0;
        for (int node = 0; node < n; ++node)
            acc += std::abs(sol_eps.value(node, s) - sol_limit.value(node, k));
        norms.per_block[static_cast<size_t>(k)] += acc / n;
    }
    return norms;
}

}  // namespace robuststop
