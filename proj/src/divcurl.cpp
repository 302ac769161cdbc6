#include "deformesh/divcurl.hpp"

#include <limits>
#include <string>

#include "deformesh/bilinear.hpp"
#include "deformesh/parallel.hpp"

namespace deformesh {

std::array<Point2, 4> cell_corners(const BackgroundMesh& mesh, int cell) {
    const auto ids = mesh.cell_nodes(cell);
    return {mesh.position(ids[0]), mesh.position(ids[1]), mesh.position(ids[2]), mesh.position(ids[3])};
}

namespace {

struct ElementKernel {
    std::array<double, 64> k{};
    std::array<double, 8> f{};
    bool inverted = false;
};

[[noreturn]] void throw_inverted(const BackgroundMesh& mesh, int cell, double det) {
    const GridIndex g = mesh.cell_index(cell);
    throw InvertedElementError("inverted cell (" + std::to_string(g.i) + "," + std::to_string(g.j) +
                                   "): quadrature Jacobian " + std::to_string(det),
                               cell, g);
}

ElementKernel element_kernel(const BackgroundMesh& mesh, int cell, const std::vector<double>& rhs,
                             const std::vector<QuadraturePoint>& rule) {
    ElementKernel ek;
    const auto corners = cell_corners(mesh, cell);
    const std::size_t nq = rule.size();
    for (std::size_t q = 0; q < nq; ++q) {
        const BilinearEval e = eval_bilinear(corners, rule[q].xi, rule[q].eta);
        if (!(e.det_jacobian > 0.0)) {
            ek.inverted = true;
            return ek;
        }
        const double w = rule[q].weight * e.det_jacobian;
        std::array<double, 8> bdiv{};
        std::array<double, 8> bcurl{};
        for (int a = 0; a < 4; ++a) {
            bdiv[2 * a] = e.dshape_dx[a];
            bdiv[2 * a + 1] = e.dshape_dy[a];
            bcurl[2 * a] = -e.dshape_dy[a];
            bcurl[2 * a + 1] = e.dshape_dx[a];
        }
        for (int r = 0; r < 8; ++r)
            for (int c = 0; c < 8; ++c)
                ek.k[r * 8 + c] += w * (bdiv[r] * bdiv[c] + bcurl[r] * bcurl[c]);
        const double r_q = rhs.empty() ? 0.0 : rhs[cell * nq + q];
        if (r_q != 0.0)
            for (int r = 0; r < 8; ++r)
                ek.f[r] += w * r_q * bdiv[r];
    }
    return ek;
}

void check_rhs_size(const BackgroundMesh& mesh, const std::vector<double>& rhs, std::size_t nq) {
    if (!rhs.empty() && rhs.size() != mesh.cell_count() * nq)
        throw Error("rhs_div has " + std::to_string(rhs.size()) + " entries, expected " +
                    std::to_string(mesh.cell_count() * nq));
}

}  // namespace

LsSystem assemble_ls_system(const DivCurlProblem& p) {
    const BackgroundMesh& mesh = p.mesh;
    const auto& rule = gauss_rule(p.opts.quadrature_order);
    check_rhs_size(mesh, p.rhs_div, rule.size());
    const int n_nodes = static_cast<int>(mesh.node_count());
    const int n_unknowns = 2 * n_nodes;

    LsSystem sys;
    sys.free_index.assign(n_unknowns, 0);
    sys.fixed_values.assign(n_unknowns, 0.0);
    std::vector<char> fixed(n_unknowns, 0);
    for (const NodeConstraint& c : p.constraints) {
        if (c.node < 0 || c.node >= n_nodes)
            throw Error("constraint references node " + std::to_string(c.node) + " out of range");
        if (!is_finite(c.value))
            throw Error("constraint value at node " + std::to_string(c.node) + " is not finite");
        const bool fx = c.mask != ConstraintMask::YOnly;
        const bool fy = c.mask != ConstraintMask::XOnly;
        if ((fx && fixed[2 * c.node]) || (fy && fixed[2 * c.node + 1]))
            throw Error("node " + std::to_string(c.node) + " is constrained twice");
        if (fx) {
            fixed[2 * c.node] = 1;
            sys.fixed_values[2 * c.node] = c.value.x;
        }
        if (fy) {
            fixed[2 * c.node + 1] = 1;
            sys.fixed_values[2 * c.node + 1] = c.value.y;
        }
    }
    int n_free = 0;
    for (int d = 0; d < n_unknowns; ++d) {
        if (fixed[d])
            sys.free_index[d] = -1;
        else {
            sys.free_index[d] = n_free++;
            sys.free_unknowns.push_back(d);
        }
    }

    // Sparsity: an unknown couples with both components of every node in its 3x3 stencil.
    CsrMatrix& a = sys.matrix;
    a.rows = n_free;
    a.row_ptr.assign(1, 0);
    for (int f = 0; f < n_free; ++f) {
        const int d = sys.free_unknowns[f];
        const GridIndex g = mesh.grid_index(d / 2);
        for (int dj = -1; dj <= 1; ++dj) {
            const int j = g.j + dj;
            if (j < 0 || j >= mesh.ny())
                continue;
            for (int di = -1; di <= 1; ++di) {
                const int i = g.i + di;
                if (i < 0 || i >= mesh.nx())
                    continue;
                for (int comp = 0; comp < 2; ++comp) {
                    const int col = sys.free_index[2 * mesh.node(i, j) + comp];
                    if (col >= 0)
                        a.col.push_back(col);
                }
            }
        }
        a.row_ptr.push_back(static_cast<int>(a.col.size()));
    }
    a.val.assign(a.col.size(), 0.0);
    sys.load.assign(n_free, 0.0);

    const int n_cells = static_cast<int>(mesh.cell_count());
    std::vector<ElementKernel> kernels(n_cells);
    parallel_for(n_cells, p.opts.threads,
                 [&](std::size_t e) { kernels[e] = element_kernel(mesh, static_cast<int>(e), p.rhs_div, rule); });

    for (int e = 0; e < n_cells; ++e) {
        const ElementKernel& ek = kernels[e];
        if (ek.inverted) {
            double worst = std::numeric_limits<double>::infinity();
            for (const auto& q : rule)
                worst = std::min(worst, bilinear_det(cell_corners(mesh, e), q.xi, q.eta));
            throw_inverted(mesh, e, worst);
        }
        const auto ids = mesh.cell_nodes(e);
        std::array<int, 8> unknown{};
        for (int l = 0; l < 8; ++l)
            unknown[l] = 2 * ids[l / 2] + l % 2;
        for (int r = 0; r < 8; ++r) {
            const int fr = sys.free_index[unknown[r]];
            if (fr < 0)
                continue;
            sys.load[fr] += ek.f[r];
            for (int c = 0; c < 8; ++c) {
                const int fc = sys.free_index[unknown[c]];
                if (fc >= 0)
                    a.val[a.find(fr, fc)] += ek.k[r * 8 + c];
                else
                    sys.load[fr] -= ek.k[r * 8 + c] * sys.fixed_values[unknown[c]];
            }
        }
    }
    return sys;
}

DivCurlSolution solve_div_curl(const DivCurlProblem& p) {
    const LsSystem sys = assemble_ls_system(p);
    const int n_free = sys.matrix.rows;
    std::vector<double> x(n_free, 0.0);
    const int max_iter = p.opts.cg_max_iter > 0 ? p.opts.cg_max_iter : std::max(10 * n_free, 10);
    const CgResult cg = pcg_jacobi(sys.matrix, sys.load, x, p.opts.cg_tol, max_iter);

    DivCurlSolution sol;
    sol.u = NodeField2(p.mesh.node_count());
    for (std::size_t n = 0; n < p.mesh.node_count(); ++n) {
        const int fx = sys.free_index[2 * n];
        const int fy = sys.free_index[2 * n + 1];
        sol.u[n] = {fx >= 0 ? x[fx] : sys.fixed_values[2 * n], fy >= 0 ? x[fy] : sys.fixed_values[2 * n + 1]};
    }
    sol.stats.iterations = cg.iterations;
    sol.stats.final_residual = cg.relative_residual;
    const DivCurlResidual res = eval_div_curl_residual(p.mesh, sol.u, p.rhs_div, p.opts.quadrature_order);
    sol.stats.functional_value = res.l2_div * res.l2_div + res.l2_curl * res.l2_curl;
    if (!cg.converged)
        throw SolverError("conjugate gradients did not converge in " + std::to_string(cg.iterations) +
                              " iterations (relative residual " + std::to_string(cg.relative_residual) + ")",
                          sol.stats);
    return sol;
}

DivCurlResidual eval_div_curl_residual(const BackgroundMesh& mesh, const NodeField2& u,
                                       const std::vector<double>& rhs_div, int quadrature_order) {
    const auto& rule = gauss_rule(quadrature_order);
    check_rhs_size(mesh, rhs_div, rule.size());
    if (u.size() != mesh.node_count())
        throw Error("field size does not match mesh node count");
    double div2 = 0.0;
    double curl2 = 0.0;
    for (int e = 0; e < static_cast<int>(mesh.cell_count()); ++e) {
        const auto ids = mesh.cell_nodes(e);
        const auto corners = cell_corners(mesh, e);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const BilinearEval ev = eval_bilinear(corners, rule[q].xi, rule[q].eta);
            double div = 0.0;
            double curl = 0.0;
            for (int a = 0; a < 4; ++a) {
                const Vec2 ua = u[ids[a]];
                div += ev.dshape_dx[a] * ua.x + ev.dshape_dy[a] * ua.y;
                curl += ev.dshape_dx[a] * ua.y - ev.dshape_dy[a] * ua.x;
            }
            const double r = rhs_div.empty() ? 0.0 : rhs_div[e * rule.size() + q];
            const double w = rule[q].weight * std::abs(ev.det_jacobian);
            div2 += w * (div - r) * (div - r);
            curl2 += w * curl * curl;
        }
    }
    return {std::sqrt(div2), std::sqrt(curl2)};
}

std::vector<double> sample_at_quadrature(const BackgroundMesh& mesh, int quadrature_order,
                                         const std::function<double(Point2)>& fn) {
    const auto& rule = gauss_rule(quadrature_order);
    std::vector<double> out;
    out.reserve(mesh.cell_count() * rule.size());
    for (int e = 0; e < static_cast<int>(mesh.cell_count()); ++e) {
        const auto corners = cell_corners(mesh, e);
        for (const auto& q : rule)
            out.push_back(fn(eval_bilinear(corners, q.xi, q.eta).position));
    }
    return out;
}

double l2_error(const BackgroundMesh& mesh, const NodeField2& u, const std::function<Vec2(Point2)>& exact,
                int quadrature_order) {
    const auto& rule = gauss_rule(quadrature_order);
    double err2 = 0.0;
    for (int e = 0; e < static_cast<int>(mesh.cell_count()); ++e) {
        const auto ids = mesh.cell_nodes(e);
        const auto corners = cell_corners(mesh, e);
        for (const auto& q : rule) {
            const BilinearEval ev = eval_bilinear(corners, q.xi, q.eta);
            Vec2 uh{};
            for (int a = 0; a < 4; ++a)
                uh += ev.shape[a] * u[ids[a]];
            const Vec2 diff = uh - exact(ev.position);
            err2 += q.weight * std::abs(ev.det_jacobian) * dot(diff, diff);
        }
    }
    return std::sqrt(err2);
}

double min_quadrature_jacobian(const BackgroundMesh& mesh, int quadrature_order) {
    const auto& rule = gauss_rule(quadrature_order);
    double worst = std::numeric_limits<double>::infinity();
    for (int e = 0; e < static_cast<int>(mesh.cell_count()); ++e) {
        const auto corners = cell_corners(mesh, e);
        for (const auto& q : rule)
            worst = std::min(worst, bilinear_det(corners, q.xi, q.eta));
    }
    return worst;
}

void check_no_inversion(const BackgroundMesh& mesh, int quadrature_order) {
    const auto& rule = gauss_rule(quadrature_order);
    for (int e = 0; e < static_cast<int>(mesh.cell_count()); ++e) {
        const auto corners = cell_corners(mesh, e);
        for (const auto& q : rule) {
            const double det = bilinear_det(corners, q.xi, q.eta);
            if (!(det > 0.0))
                throw_inverted(mesh, e, det);
        }
    }
}

}  // namespace deformesh
