#include "robuststop/model.hpp"

#include "robuststop/errors.hpp"

#include <algorithm>
#include <cmath>

namespace robuststop {

namespace {

double pick(const std::vector<double>& coef, int regime) {
    return coef.size() == 1 ? coef[0] : coef[static_cast<size_t>(regime)];
}

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x < xs.front() - 1e-12 || x > xs.back() + 1e-12) throw OutOfDomain(x);
    x = std::clamp(x, xs.front(), xs.back());
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin()) return ys.front();
    if (it == xs.end()) return ys.back();
    size_t hi = static_cast<size_t>(it - xs.begin());
    size_t lo = hi - 1;
    double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return (1.0 - w) * ys[lo] + w * ys[hi];
}

}  // namespace

double ScalarField::operator()(double x, int regime) const {
    switch (kind) {
        case Kind::Zero: return 0.0;
        case Kind::Constant: return pick(coef, regime);
        case Kind::Linear: return pick(coef, regime) * x;
        case Kind::CallObstacle: return x - fee;
        case Kind::Tabulated: {
            const auto& row = table.size() == 1 ? table[0] : table[static_cast<size_t>(regime)];
            return interp(xs, row, x);
        }
    }
    return 0.0;
}

bool ScalarField::regime_independent() const {
    switch (kind) {
        case Kind::Zero:
        case Kind::CallObstacle: return true;
        case Kind::Constant:
        case Kind::Linear: return coef.size() == 1;
        case Kind::Tabulated: return table.size() == 1;
    }
    return false;
}

ScalarField ScalarField::constant(std::vector<double> values) {
    ScalarField f;
    f.kind = Kind::Constant;
    f.coef = std::move(values);
    return f;
}

ScalarField ScalarField::linear(std::vector<double> slopes) {
    ScalarField f;
    f.kind = Kind::Linear;
    f.coef = std::move(slopes);
    return f;
}

ScalarField ScalarField::call_obstacle(double fee) {
    if (!(fee > 0.0)) throw ValidationError("call obstacle fee must be positive");
    ScalarField f;
    f.kind = Kind::CallObstacle;
    f.fee = fee;
    return f;
}

ScalarField ScalarField::tabulated(std::vector<double> xs, std::vector<std::vector<double>> table) {
    if (xs.size() < 2) throw ValidationError("tabulated field needs at least two nodes");
    for (size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw ValidationError("tabulated nodes must be strictly ascending");
    for (const auto& row : table)
        if (row.size() != xs.size())
            throw ValidationError("tabulated row length does not match the declared grid");
    ScalarField f;
    f.kind = Kind::Tabulated;
    f.xs = std::move(xs);
    f.table = std::move(table);
    return f;
}

CoefficientModel gbm_linear_coefficients(std::vector<double> b, std::vector<double> sigma) {
    return {ScalarField::linear(std::move(b)), ScalarField::linear(std::move(sigma))};
}

CoefficientModel constant_coefficients(std::vector<double> b, std::vector<double> sigma) {
    return {ScalarField::constant(std::move(b)), ScalarField::constant(std::move(sigma))};
}

CoefficientModel tabulated_coefficients(std::vector<double> xs, std::vector<std::vector<double>> b,
                                        std::vector<std::vector<double>> sigma) {
    auto bx = ScalarField::tabulated(xs, std::move(b));
    auto sx = ScalarField::tabulated(std::move(xs), std::move(sigma));
    return {std::move(bx), std::move(sx)};
}

namespace {

void check_sizes(const ScalarField& f, int m, const char* name) {
    switch (f.kind) {
        case ScalarField::Kind::Constant:
        case ScalarField::Kind::Linear:
            if (f.coef.size() != 1 && static_cast<int>(f.coef.size()) != m)
                throw ValidationError(std::string(name) + " has " + std::to_string(f.coef.size()) +
                                      " entries, expected 1 or " + std::to_string(m));
            break;
        case ScalarField::Kind::Tabulated:
            if (f.table.size() != 1 && static_cast<int>(f.table.size()) != m)
                throw ValidationError(std::string(name) + " has " + std::to_string(f.table.size()) +
                                      " tabulated rows, expected 1 or " + std::to_string(m));
            break;
        default: break;
    }
}

}  // namespace

void validate_problem(const ProblemSpec& spec) {
    if (spec.regimes < 1) throw ValidationError("regimes must be >= 1");
    if (spec.chain.m != spec.regimes)
        throw ValidationError("chain has " + std::to_string(spec.chain.m) + " states, expected " +
                              std::to_string(spec.regimes));
    if (!(spec.discount > 0.0)) throw ValidationError("discount must be positive");
    if (spec.theta < 0.0) throw ValidationError("theta must be >= 0");
    if (!(spec.q_max > 0.0)) throw ValidationError("q_max must be positive");
    if (!(spec.x_min < spec.x_max)) throw ValidationError("domain requires x_min < x_max");
    check_sizes(spec.dynamics.b, spec.regimes, "coefficients.b");
    check_sizes(spec.dynamics.sigma, spec.regimes, "coefficients.sigma");
    check_sizes(spec.rewards.running, spec.regimes, "rewards.running");
    check_sizes(spec.rewards.obstacle, spec.regimes, "rewards.terminal");
}

PointCoeffs evaluate_coefficients(const ProblemSpec& spec, double x, int regime) {
    return {spec.dynamics.b(x, regime), spec.dynamics.sigma(x, regime),
            spec.rewards.running(x, regime), spec.rewards.obstacle(x, regime)};
}

double worst_case_control(const ProblemSpec& spec, double sigma, double dv) {
    if (spec.theta == 0.0) return 0.0;
    return std::clamp(-spec.theta * sigma * dv, -spec.q_max, spec.q_max);
}

double worst_case_control(const ProblemSpec& spec, double x, int regime, double dv) {
    return worst_case_control(spec, spec.dynamics.sigma(x, regime), dv);
}

double hamiltonian_residual(const ProblemSpec& spec, int regime, double x,
                            std::span<const double> v_all, double dv, double ddv) {
    const double b = spec.dynamics.b(x, regime);
    const double sigma = spec.dynamics.sigma(x, regime);
    const double s2 = sigma * sigma;
    const double f = spec.rewards.running(x, regime);
    double coupling = 0.0;
    for (int j = 0; j < spec.regimes; ++j) {
        if (j == regime) continue;
        coupling += spec.chain.rate(regime, j) * (v_all[static_cast<size_t>(j)] - v_all[static_cast<size_t>(regime)]);
    }
    return spec.discount * v_all[static_cast<size_t>(regime)] - b * dv +
           0.5 * spec.theta * s2 * dv * dv - 0.5 * s2 * ddv - coupling - f;
}

double complementarity_residual(const ProblemSpec& spec, int regime, double x,
                                std::span<const double> v_all, double dv, double ddv) {
    const double g = spec.rewards.obstacle(x, regime);
    return std::min(hamiltonian_residual(spec, regime, x, v_all, dv, ddv),
                    v_all[static_cast<size_t>(regime)] - g);
}

}  // namespace robuststop
