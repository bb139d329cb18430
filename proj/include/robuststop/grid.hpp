#pragma once

namespace robuststop {

/// Uniform grid x_min + n*h, n = 0..n_nodes-1, spanning [x_min, x_max].
struct Grid {
    double x_min = 0.0, x_max = 0.0, h = 0.0;
    int n_nodes = 0;

    double x(int n) const { return x_min + n * h; }
    bool same_as(const Grid& other, double tol = 1e-9) const;
};

/// Requires the span to be an integer multiple of h (tolerance 1e-9 on the
/// ratio); throws NonCommensurate otherwise.
Grid build_grid(double x_min, double x_max, double h);

}  // namespace robuststop
