#include "robuststop/markov_chain.hpp"

#include "robuststop/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdlib>
#include <queue>

namespace robuststop {

namespace {

// BFS reachability over edges i->j with Q_ij > 0.
std::vector<char> reachable_from(const Generator& g, int start, bool transpose) {
    std::vector<char> seen(g.m, 0);
    std::queue<int> frontier;
    seen[start] = 1;
    frontier.push(start);
    while (!frontier.empty()) {
        int i = frontier.front();
        frontier.pop();
        for (int j = 0; j < g.m; ++j) {
            if (j == i || seen[j]) continue;
            double rate = transpose ? g.rate(j, i) : g.rate(i, j);
            if (rate > 0.0) {
                seen[j] = 1;
                frontier.push(j);
            }
        }
    }
    return seen;
}

}  // namespace

bool Generator::irreducible() const {
    if (m == 1) return true;
    auto fwd = reachable_from(*this, 0, false);
    auto bwd = reachable_from(*this, 0, true);
    for (int i = 0; i < m; ++i) {
        if (!fwd[i] || !bwd[i]) return false;
    }
    return true;
}

int TwoTimeScaleSpec::total_states() const {
    int n = 0;
    for (const auto& b : fast_blocks) n += b.m;
    return n;
}

int TwoTimeScaleSpec::block_offset(int k) const {
    int off = 0;
    for (int b = 0; b < k; ++b) off += fast_blocks[b].m;
    return off;
}

int TwoTimeScaleSpec::block_of(int s) const {
    int off = 0;
    for (int k = 0; k < num_blocks(); ++k) {
        off += fast_blocks[k].m;
        if (s < off) return k;
    }
    return num_blocks() - 1;
}

Generator validate_generator(const std::vector<std::vector<double>>& rates) {
    const int m = static_cast<int>(rates.size());
    if (m < 1) throw ValidationError("generator must have at least one state");
    Generator g;
    g.m = m;
    g.rates.resize(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        if (static_cast<int>(rates[i].size()) != m)
            throw ValidationError("generator row " + std::to_string(i) + " has " +
                                  std::to_string(rates[i].size()) + " entries, expected " +
                                  std::to_string(m));
        double sum = 0.0;
        for (int j = 0; j < m; ++j) {
            double v = rates[i][j];
            if (i != j && v < 0.0) throw NegativeOffDiagonal(i, j, v);
            sum += v;
            g.rate(i, j) = v;
        }
        if (std::abs(sum) > Generator::row_sum_tol) throw RowSumNonzero(i, sum);
    }
    return g;
}

TwoTimeScaleSpec validate_two_time_scale(std::vector<Generator> fast_blocks, Generator slow,
                                         double epsilon) {
    if (fast_blocks.empty()) throw ValidationError("two-time-scale spec needs at least one fast block");
    if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
    int total = 0;
    for (size_t k = 0; k < fast_blocks.size(); ++k) {
        const auto& blk = fast_blocks[k];
        // Re-validate: callers may have built the block by hand.
        std::vector<std::vector<double>> rows(blk.m);
        for (int i = 0; i < blk.m; ++i)
            rows[i].assign(blk.rates.begin() + static_cast<size_t>(i) * blk.m,
                           blk.rates.begin() + static_cast<size_t>(i + 1) * blk.m);
        validate_generator(rows);
        if (!blk.irreducible())
            throw ValidationError("fast block " + std::to_string(k) + " is not irreducible");
        total += blk.m;
    }
    if (slow.m != total)
        throw ValidationError("slow generator has size " + std::to_string(slow.m) +
                              ", fast blocks total " + std::to_string(total));
    TwoTimeScaleSpec tts;
    tts.fast_blocks = std::move(fast_blocks);
    tts.slow = std::move(slow);
    tts.epsilon = epsilon;
    return tts;
}

ProbVector stationary_distribution(const Generator& g) {
    if (!g.irreducible()) throw ReducibleChain();
    const int m = g.m;
    if (m == 1) return ProbVector{{1.0}};

    // nu solves the augmented system [Q^T; 1^T] nu = [0; 1]. For an irreducible
    // chain rank(Q^T) = m-1, so replacing one redundant row of Q^T with the
    // normalization keeps a nonsingular m x m system for dense LU.
    Eigen::MatrixXd a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = g.rate(j, i);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    a.row(m - 1).setOnes();
    rhs(m - 1) = 1.0;
    Eigen::VectorXd nu = a.partialPivLu().solve(rhs);

    ProbVector pv;
    pv.weights.resize(m);
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
        double w = nu(i);
        if (w < 0.0) {
            if (w < -1e-12) throw ValidationError("stationary solve produced negative weight");
            w = 0.0;
        }
        pv.weights[i] = w;
        total += w;
    }
    for (double& w : pv.weights) w /= total;

    double resid = 0.0;
    for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += pv.weights[i] * g.rate(i, j);
        resid = std::max(resid, std::abs(s));
    }
    if (resid > 1e-10)
        throw ValidationError("stationary distribution residual " + std::to_string(resid) +
                              " exceeds 1e-10");
    return pv;
}

Generator assemble_generator(const TwoTimeScaleSpec& tts) {
    const int m = tts.total_states();
    std::vector<std::vector<double>> rows(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) rows[i][j] = tts.slow.rate(i, j);
    int off = 0;
    for (const auto& blk : tts.fast_blocks) {
        for (int i = 0; i < blk.m; ++i)
            for (int j = 0; j < blk.m; ++j) rows[off + i][off + j] += blk.rate(i, j) / tts.epsilon;
        off += blk.m;
    }
    return validate_generator(rows);
}

Generator limit_generator(const TwoTimeScaleSpec& tts) {
    const int L = tts.num_blocks();
    std::vector<ProbVector> nus;
    nus.reserve(L);
    for (const auto& blk : tts.fast_blocks) nus.push_back(stationary_distribution(blk));

    std::vector<std::vector<double>> rows(L, std::vector<double>(L, 0.0));
    for (int k = 0; k < L; ++k) {
        const int off_k = tts.block_offset(k);
        for (int p = 0; p < L; ++p) {
            const int off_p = tts.block_offset(p);
            double sum = 0.0;
            for (int l = 0; l < tts.fast_blocks[k].m; ++l)
                for (int j = 0; j < tts.fast_blocks[p].m; ++j)
                    sum += nus[k].weights[l] * tts.slow.rate(off_k + l, off_p + j);
            rows[k][p] = sum;
        }
    }
    // Row sums inherit the slow generator's zero row sums scaled by sum(nu)=1;
    // absorb the accumulated rounding into the diagonal before validation.
    for (int k = 0; k < L; ++k) {
        double off_sum = 0.0;
        for (int p = 0; p < L; ++p) {
            if (p == k) continue;
            if (rows[k][p] < 0.0 && rows[k][p] > -1e-13) rows[k][p] = 0.0;
            off_sum += rows[k][p];
        }
        rows[k][k] = -off_sum;
    }
    return validate_generator(rows);
}

}  // namespace robuststop
