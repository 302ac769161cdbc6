#pragma once

#include <span>
#include <vector>

namespace deformesh {

/// Compressed sparse row matrix with sorted column indices in each row.
struct CsrMatrix {
    int rows = 0;
    std::vector<int> row_ptr{0};
    std::vector<int> col;
    std::vector<double> val;

    std::size_t nonzeros() const { return val.size(); }
    /// Position of (r, c) in `val`, or -1 when outside the pattern.
    long find(int r, int c) const;
    double at(int r, int c) const;
    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> diagonal() const;
};

struct CgResult {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients for SPD systems. `x` holds the
/// initial guess on entry. Convergence: ||b - A x|| <= tol * ||b||.
CgResult pcg_jacobi(const CsrMatrix& a, std::span<const double> b, std::span<double> x, double tol, int max_iter);

}  // namespace deformesh
