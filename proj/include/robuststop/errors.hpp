#pragma once

#include <stdexcept>
#include <string>

namespace robuststop {

/// Base for all input/validation failures. CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class NegativeOffDiagonal : public ValidationError {
public:
    NegativeOffDiagonal(int i, int j, double value)
        : ValidationError("generator entry (" + std::to_string(i) + "," + std::to_string(j) +
                          ") = " + std::to_string(value) + " is negative off the diagonal"),
          row(i), col(j) {}
    int row, col;
};

class RowSumNonzero : public ValidationError {
public:
    RowSumNonzero(int i, double sum)
        : ValidationError("generator row " + std::to_string(i) + " sums to " +
                          std::to_string(sum) + ", expected 0"),
          row(i), row_sum(sum) {}
    int row;
    double row_sum;
};

class ReducibleChain : public ValidationError {
public:
    ReducibleChain() : ValidationError("generator is reducible: no single communicating class") {}
};

class NonCommensurate : public ValidationError {
public:
    NonCommensurate(double span, double h)
        : ValidationError("grid span " + std::to_string(span) + " is not an integer multiple of h = " +
                          std::to_string(h)) {}
};

class OutOfDomain : public ValidationError {
public:
    explicit OutOfDomain(double x)
        : ValidationError("x = " + std::to_string(x) + " lies outside the tabulated grid hull"), x(x) {}
    double x;
};

class ObstacleRegimeDependent : public ValidationError {
public:
    ObstacleRegimeDependent()
        : ValidationError("aggregation requires a regime-independent obstacle g(x)") {}
};

class ChainMismatch : public ValidationError {
public:
    explicit ChainMismatch(const std::string& detail)
        : ValidationError("problem chain does not match the assembled two-time-scale generator: " + detail) {}
};

class GridMismatch : public ValidationError {
public:
    explicit GridMismatch(const std::string& detail) : ValidationError("grid mismatch: " + detail) {}
};

class NoThreshold : public ValidationError {
public:
    explicit NoThreshold(int regime)
        : ValidationError("regime " + std::to_string(regime + 1) +
                          " has no threshold-type stopping boundary"),
          regime(regime) {}
    int regime;
};

/// Iteration budget exhausted before reaching tolerance. CLI maps to exit code 2.
class MaxIterations : public std::runtime_error {
public:
    MaxIterations(const std::string& which, int limit)
        : std::runtime_error("maximum " + which + " iterations (" + std::to_string(limit) +
                             ") reached before convergence"),
          which(which) {}
    std::string which;
};

}  // namespace robuststop
