#pragma once

#include "robuststop/free_boundary.hpp"

#include <cstdint>
#include <vector>

namespace robuststop {

/// Deterministic per-path random stream: splitmix-seeded mt19937_64 with
/// locale- and library-independent uniform and normal draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    /// Uniform on the open interval (0,1).
    double uniform01();
    /// Standard normal via Box-Muller on uniform01 pairs.
    double normal();

private:
    std::uint64_t state_;
    std::uint64_t next_u64();
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Ambiguity control applied along simulated paths.
struct QPolicy {
    enum class Kind { WorstCaseFromSolution, Zero, Constant };
    Kind kind = Kind::WorstCaseFromSolution;
    double constant = 0.0;
};

struct SimConfig {
    double x0 = 0.0;
    int i0 = 0;  // 0-based regime
    double dt = 1e-3;
    double horizon = 0.0;  // <= 0: choose T with exp(-r T) = 1e-8
    std::int64_t n_paths = 100000;
    std::uint64_t seed = 0;
    QPolicy policy;
    int threads = 0;  // <= 0: hardware concurrency
};

struct SimulationReport {
    double estimate = 0.0;
    double std_error = 0.0;
    std::int64_t n_paths = 0;
    double fraction_stopped = 0.0;  // before the horizon
    double mean_stop_time = 0.0;    // over stopped paths
    std::int64_t domain_escapes = 0;
};

/// One segment of a piecewise-constant regime path; state holds from t_begin
/// until the next segment's t_begin (or the horizon).
struct RegimeSegment {
    double t_begin;
    int state;
};

/// Embedded-chain sampling: exponential holding times with rate -Q_ii, next
/// state j != i with probability Q_ij / (-Q_ii); absorbing when Q_ii = 0.
std::vector<RegimeSegment> sample_regime_path(const Generator& chain, int i0, double horizon,
                                              Rng& rng);

/// Euler-Maruyama under the distorted dynamics
///   dX = [b(X,a) + sigma(X,a) q] dt + sigma(X,a) dB
/// with q from the selected policy, stopping at the first step where (X,a)
/// leaves the continuation mask. Accrues exp(-rt)(f + q^2/(2 theta)) by
/// left-endpoint quadrature plus the discounted obstacle at stopping; paths
/// alive at the horizon keep only their running integral. Bit-identical for
/// fixed (seed, n_paths, dt) regardless of thread count.
/// `per_path` (optional) receives each path's discounted reward.
SimulationReport simulate_reward(const ProblemSpec& spec, const SolutionField& sol,
                                 const StoppingRule& rule, const SimConfig& cfg,
                                 std::vector<double>* per_path = nullptr);

}  // namespace robuststop
