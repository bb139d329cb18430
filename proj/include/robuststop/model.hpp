#pragma once

#include "robuststop/markov_chain.hpp"

#include <span>
#include <vector>

namespace robuststop {

/// One scalar coefficient of the problem as a function of (x, regime).
///
/// Kinds: Zero; Constant c_i; Linear c_i * x (the switching-GBM form);
/// CallObstacle x - fee (regime independent); Tabulated samples on an
/// ascending node set with linear interpolation between nodes.
/// `coef` (and each tabulated row) holds either one shared entry or one
/// entry per regime.
struct ScalarField {
    enum class Kind { Zero, Constant, Linear, CallObstacle, Tabulated };

    Kind kind = Kind::Zero;
    std::vector<double> coef;
    double fee = 0.0;
    std::vector<double> xs;
    std::vector<std::vector<double>> table;

    double operator()(double x, int regime) const;
    bool regime_independent() const;

    static ScalarField zero() { return {}; }
    static ScalarField constant(std::vector<double> values);
    static ScalarField linear(std::vector<double> slopes);
    static ScalarField call_obstacle(double fee);
    static ScalarField tabulated(std::vector<double> xs, std::vector<std::vector<double>> table);
};

/// Drift and volatility b(x,i), sigma(x,i). Both share one kind.
struct CoefficientModel {
    ScalarField b;
    ScalarField sigma;
};

CoefficientModel gbm_linear_coefficients(std::vector<double> b, std::vector<double> sigma);
CoefficientModel constant_coefficients(std::vector<double> b, std::vector<double> sigma);
CoefficientModel tabulated_coefficients(std::vector<double> xs, std::vector<std::vector<double>> b,
                                        std::vector<std::vector<double>> sigma);

/// Running reward f(x,i) and terminal obstacle g.
struct RewardModel {
    ScalarField running;
    ScalarField obstacle;
};

/// Full data of one robust stopping problem.
struct ProblemSpec {
    int regimes = 0;
    Generator chain;
    CoefficientModel dynamics;
    RewardModel rewards;
    double discount = 0.0;  // r > 0
    double theta = 0.0;     // ambiguity factor >= 0; 0 means no ambiguity (q* = 0)
    double q_max = 1e3;     // clamp bound for admissible drift distortions
    double x_min = 0.0, x_max = 0.0;
};

/// Cross-checks ProblemSpec invariants; throws ValidationError naming the field.
void validate_problem(const ProblemSpec& spec);

struct PointCoeffs {
    double b, sigma, f, g;
};

/// Pointwise coefficient values for regime i at x (0-based regime).
PointCoeffs evaluate_coefficients(const ProblemSpec& spec, double x, int regime);

/// Worst-case ambiguity control clamp(-theta * sigma(x,i) * dv, +-q_max).
double worst_case_control(const ProblemSpec& spec, double x, int regime, double dv);
double worst_case_control(const ProblemSpec& spec, double sigma, double dv);

/// Residual of the continuation operator in supremum form:
/// r v - b v' + (theta/2) sigma^2 v'^2 - (1/2) sigma^2 v'' - Qv(x,.)(i) - f.
/// v_all supplies v(x,j) for every regime.
double hamiltonian_residual(const ProblemSpec& spec, int regime, double x,
                            std::span<const double> v_all, double dv, double ddv);

/// min(hamiltonian_residual, v - g): zero at interior nodes of an exact solution.
double complementarity_residual(const ProblemSpec& spec, int regime, double x,
                                std::span<const double> v_all, double dv, double ddv);

}  // namespace robuststop
