#include "robuststop/grid.hpp"

#include "robuststop/errors.hpp"

#include <cmath>

namespace robuststop {

bool Grid::same_as(const Grid& other, double tol) const {
    return n_nodes == other.n_nodes && std::abs(x_min - other.x_min) <= tol &&
           std::abs(x_max - other.x_max) <= tol && std::abs(h - other.h) <= tol;
}

Grid build_grid(double x_min, double x_max, double h) {
    if (!(h > 0.0)) throw ValidationError("grid step h must be positive");
    if (!(x_min < x_max)) throw ValidationError("grid requires x_min < x_max");
    const double span = x_max - x_min;
    const double steps = span / h;
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) > 1e-9 || rounded < 1.0) throw NonCommensurate(span, h);
    Grid g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.h = h;
    g.n_nodes = static_cast<int>(rounded) + 1;
    return g;
}

}  // namespace robuststop
