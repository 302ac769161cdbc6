#include "deformesh/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace deformesh {

long CsrMatrix::find(int r, int c) const {
    const auto first = col.begin() + row_ptr[r];
    const auto last = col.begin() + row_ptr[r + 1];
    const auto it = std::lower_bound(first, last, c);
    if (it == last || *it != c)
        return -1;
    return static_cast<long>(it - col.begin());
}

double CsrMatrix::at(int r, int c) const {
    const long k = find(r, c);
    return k < 0 ? 0.0 : val[k];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (int r = 0; r < rows; ++r) {
        double s = 0.0;
        for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
            s += val[k] * x[col[k]];
        y[r] = s;
    }
}

std::vector<double> CsrMatrix::diagonal() const {
    std::vector<double> d(rows, 0.0);
    for (int r = 0; r < rows; ++r)
        d[r] = at(r, r);
    return d;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

CgResult pcg_jacobi(const CsrMatrix& a, std::span<const double> b, std::span<double> x, double tol, int max_iter) {
    const int n = a.rows;
    CgResult res;
    if (n == 0) {
        res.converged = true;
        return res;
    }
    const double b_norm = std::sqrt(dot(b, b));
    if (b_norm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        res.converged = true;
        return res;
    }

    std::vector<double> inv_diag = a.diagonal();
    for (double& d : inv_diag)
        d = d > 0.0 ? 1.0 / d : 1.0;

    std::vector<double> r(n), z(n), p(n), q(n);
    a.multiply(x, r);
    for (int i = 0; i < n; ++i)
        r[i] = b[i] - r[i];
    for (int i = 0; i < n; ++i)
        z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = dot(r, z);
    double r_norm = std::sqrt(dot(r, r));

    while (r_norm > tol * b_norm && res.iterations < max_iter) {
        a.multiply(p, q);
        const double pq = dot(p, q);
        if (!(pq > 0.0))
            break;  // loss of positive definiteness
        const double alpha = rz / pq;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        for (int i = 0; i < n; ++i)
            z[i] = inv_diag[i] * r[i];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i)
            p[i] = z[i] + beta * p[i];
        r_norm = std::sqrt(dot(r, r));
        ++res.iterations;
    }
    res.relative_residual = r_norm / b_norm;
    res.converged = r_norm <= tol * b_norm;
    return res;
}

}  // namespace deformesh
