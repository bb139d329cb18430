#pragma once

#include <vector>

namespace robuststop {

/// Rate matrix of a continuous-time Markov chain. Off-diagonal entries are
/// nonnegative jump intensities (1/time); every row sums to zero.
struct Generator {
    static constexpr double row_sum_tol = 1e-12;

    int m = 0;
    std::vector<double> rates;  // row-major m*m

    double rate(int i, int j) const { return rates[static_cast<size_t>(i) * m + j]; }
    double& rate(int i, int j) { return rates[static_cast<size_t>(i) * m + j]; }

    /// Strong connectivity of the digraph of positive off-diagonal entries.
    bool irreducible() const;
};

/// Probability vector: nonnegative weights summing to one.
struct ProbVector {
    std::vector<double> weights;
};

/// Fast/slow decomposition of a large chain: the full generator is
/// (1/epsilon) * diag(fast_blocks) + slow. Block ordering defines the state
/// labels: states of block k occupy one contiguous index range.
struct TwoTimeScaleSpec {
    std::vector<Generator> fast_blocks;
    Generator slow;
    double epsilon = 1.0;

    int total_states() const;
    int num_blocks() const { return static_cast<int>(fast_blocks.size()); }
    /// First global state index of block k.
    int block_offset(int k) const;
    /// Block index of global state s.
    int block_of(int s) const;
};

/// Checks the Generator invariants and returns the validated matrix.
/// Throws NegativeOffDiagonal or RowSumNonzero naming the violating entry.
Generator validate_generator(const std::vector<std::vector<double>>& rates);

/// Validates block structure: every fast block a valid irreducible Generator,
/// slow a valid Generator of the summed size, epsilon > 0.
TwoTimeScaleSpec validate_two_time_scale(std::vector<Generator> fast_blocks, Generator slow,
                                         double epsilon);

/// Stationary distribution nu with nu*Q = 0, sum(nu) = 1.
/// Requires an irreducible chain; residual ||nu*Q||_inf is kept below 1e-10.
ProbVector stationary_distribution(const Generator& g);

/// Full generator (1/epsilon) * diag(fast blocks) + slow.
Generator assemble_generator(const TwoTimeScaleSpec& tts);

/// Aggregated L x L generator of the limit chain:
/// diag(nu^1..nu^L) * slow * diag(1_{m_1}..1_{m_L}).
Generator limit_generator(const TwoTimeScaleSpec& tts);

}  // namespace robuststop
