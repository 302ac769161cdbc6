#include <doctest.h>

#include <cmath>
#include <vector>

#include "deformesh/sparse.hpp"

using namespace deformesh;

namespace {

// Tridiagonal 1-D Laplacian plus a diagonal shift.
CsrMatrix laplacian(int n, double shift) {
    CsrMatrix a;
    a.rows = n;
    for (int r = 0; r < n; ++r) {
        if (r > 0) {
            a.col.push_back(r - 1);
            a.val.push_back(-1.0);
        }
        a.col.push_back(r);
        a.val.push_back(2.0 + shift * (r + 1));
        if (r + 1 < n) {
            a.col.push_back(r + 1);
            a.val.push_back(-1.0);
        }
        a.row_ptr.push_back(static_cast<int>(a.col.size()));
    }
    return a;
}

std::vector<double> dense_solve(std::vector<std::vector<double>> m, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(m[r][k]) > std::abs(m[piv][k]))
                piv = r;
        std::swap(m[k], m[piv]);
        std::swap(b[k], b[piv]);
        for (std::size_t r = k + 1; r < n; ++r) {
            const double f = m[r][k] / m[k][k];
            for (std::size_t c = k; c < n; ++c)
                m[r][c] -= f * m[k][c];
            b[r] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t c = k + 1; c < n; ++c)
            s -= m[k][c] * x[c];
        x[k] = s / m[k][k];
    }
    return x;
}

}  // namespace

TEST_SUITE("sparse") {

TEST_CASE("csr accessors") {
    const CsrMatrix a = laplacian(4, 0.0);
    CHECK(a.at(1, 1) == 2.0);
    CHECK(a.at(1, 2) == -1.0);
    CHECK(a.at(0, 3) == 0.0);
    CHECK(a.find(0, 3) == -1);
    std::vector<double> y(4);
    a.multiply(std::vector<double>{1, 1, 1, 1}, y);
    CHECK(y == std::vector<double>{1, 0, 0, 1});
}

TEST_CASE("pcg matches dense elimination") {
    const int n = 30;
    const CsrMatrix a = laplacian(n, 0.1);
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            dense[r][c] = a.at(r, c);
    std::vector<double> b(n);
    for (int r = 0; r < n; ++r)
        b[r] = std::sin(0.3 * r) + 0.5;
    const std::vector<double> expect = dense_solve(dense, b);
    std::vector<double> x(n, 0.0);
    const CgResult res = pcg_jacobi(a, b, x, 1e-13, 10 * n);
    CHECK(res.converged);
    CHECK(res.relative_residual <= 1e-13);
    for (int r = 0; r < n; ++r)
        CHECK(x[r] == doctest::Approx(expect[r]).epsilon(1e-10));
}

TEST_CASE("pcg with zero load returns zero") {
    const CsrMatrix a = laplacian(5, 0.0);
    std::vector<double> x(5, 3.0);
    const CgResult res = pcg_jacobi(a, std::vector<double>(5, 0.0), x, 1e-10, 50);
    CHECK(res.converged);
    CHECK(x == std::vector<double>(5, 0.0));
}

TEST_CASE("pcg reports non-convergence") {
    const CsrMatrix a = laplacian(200, 0.0);
    std::vector<double> x(200, 0.0);
    const CgResult res = pcg_jacobi(a, std::vector<double>(200, 1.0), x, 1e-14, 3);
    CHECK_FALSE(res.converged);
    CHECK(res.iterations == 3);
}

}
