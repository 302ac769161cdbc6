#include "deformesh/deformation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "deformesh/bilinear.hpp"

namespace deformesh {

SizeFunction SizeFunction::constant(double value) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw Error("size function must be positive");
    SizeFunction s;
    s.f = [value](Point2, double) { return value; };
    s.dgdt = [](Point2, double) { return 0.0; };
    s.uniform = true;
    return s;
}

SizeFunction SizeFunction::with_derivative(std::function<double(Point2, double)> f,
                                           std::function<double(Point2, double)> dgdt) {
    SizeFunction s;
    s.f = std::move(f);
    s.dgdt = std::move(dgdt);
    return s;
}

SizeFunction SizeFunction::finite_difference(std::function<double(Point2, double)> f, double delta) {
    if (!(delta > 0.0))
        throw Error("finite-difference step must be positive");
    SizeFunction s;
    s.dgdt = [f, delta](Point2 p, double t) { return (1.0 / f(p, t + delta) - 1.0 / f(p, t - delta)) / (2.0 * delta); };
    s.f = std::move(f);
    return s;
}

namespace {

double checked_size(const SizeFunction& s, Point2 p, double t) {
    const double v = s.f(p, t);
    if (!(v > 0.0) || !std::isfinite(v))
        throw Error("size function is not positive at (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                    ") t=" + std::to_string(t));
    return v;
}

}  // namespace

Vec2 dirichlet_vector(Point2 p, Point2 q, double f, int n_steps) {
    return (q - p) / (n_steps * f);
}

std::vector<NodeConstraint> dirichlet_velocity(const BackgroundMesh& mesh, const SelectionResult& sel,
                                               std::span<const Point2> targets, const SizeFunction& size_fn,
                                               double t, int n_steps, const DeformationOptions& options) {
    if (targets.size() != sel.pairs.size())
        throw Error("expected one target per selected node");
    if (n_steps < 1)
        throw Error("number of steps must be at least 1");
    std::vector<NodeConstraint> out;
    out.reserve(sel.pairs.size() + 2 * (mesh.nx() + mesh.ny()));
    for (std::size_t k = 0; k < sel.pairs.size(); ++k) {
        const GridIndex g = sel.pairs[k].node;
        const int node = mesh.node(g);
        const double f = checked_size(size_fn, mesh.position(node), t);
        out.push_back({node, dirichlet_vector(mesh.grid_point(g.i, g.j), targets[k], f, n_steps)});
    }
    const int nx = mesh.nx();
    const int ny = mesh.ny();
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            if (!mesh.on_outer_rectangle(i, j))
                continue;
            const int node = mesh.node(i, j);
            switch (options.outer) {
            case OuterBoundary::ZeroDirichlet:
                out.push_back({node, {0.0, 0.0}});
                break;
            case OuterBoundary::ZeroNormal: {
                const bool vertical_side = i == 0 || i == nx - 1;
                const bool horizontal_side = j == 0 || j == ny - 1;
                const ConstraintMask mask = vertical_side && horizontal_side ? ConstraintMask::Both
                                            : vertical_side                  ? ConstraintMask::XOnly
                                                                             : ConstraintMask::YOnly;
                out.push_back({node, {0.0, 0.0}, mask});
                break;
            }
            case OuterBoundary::Prescribed:
                if (!options.outer_velocity)
                    throw Error("prescribed outer boundary requires an outer_velocity function");
                out.push_back({node, options.outer_velocity(mesh.position(node), t) / n_steps});
                break;
            }
        }
    }
    return out;
}

NodeField2 step_increment(const BackgroundMesh& mesh, const SizeFunction& size_fn,
                          const std::vector<NodeConstraint>& constraints, double t, double dt,
                          const SolverOptions& opts, SolveStats* stats) {
    // div U = -dt d(1/f)/dt keeps J/f constant along trajectories.
    std::vector<double> rhs;
    if (!size_fn.uniform)
        rhs = sample_at_quadrature(mesh, opts.quadrature_order,
                                   [&](Point2 p) { return -dt * size_fn.dgdt(p, t); });
    const DivCurlProblem problem{mesh, std::move(rhs), constraints, opts};
    DivCurlSolution sol = solve_div_curl(problem);
    if (stats)
        *stats = sol.stats;
    NodeField2 v = std::move(sol.u);
    for (std::size_t n = 0; n < v.size(); ++n)
        v[n] = checked_size(size_fn, mesh.position(static_cast<int>(n)), t) * v[n];
    return v;
}

SolveStats advance_step(BackgroundMesh& mesh, const SizeFunction& size_fn,
                        const std::vector<NodeConstraint>& constraints, double t, double dt,
                        const SolverOptions& opts) {
    SolveStats stats;
    const NodeField2 inc = step_increment(mesh, size_fn, constraints, t, dt, opts, &stats);
    auto& pos = mesh.positions();
    for (std::size_t n = 0; n < pos.size(); ++n)
        pos[n] += inc[n];
    check_no_inversion(mesh, opts.quadrature_order);
    return stats;
}

std::vector<double> jacobian_field(const BackgroundMesh& before, const BackgroundMesh& now, int quadrature_order) {
    if (before.nx() != now.nx() || before.ny() != now.ny())
        throw Error("jacobian_field needs meshes with the same topology");
    const auto& rule = gauss_rule(quadrature_order);
    std::vector<double> out;
    out.reserve(now.cell_count() * rule.size());
    for (int e = 0; e < static_cast<int>(now.cell_count()); ++e) {
        const auto c0 = cell_corners(before, e);
        const auto c1 = cell_corners(now, e);
        for (const auto& q : rule)
            out.push_back(bilinear_det(c1, q.xi, q.eta) / bilinear_det(c0, q.xi, q.eta));
    }
    return out;
}

namespace {

void record_trace(const BackgroundMesh& initial, const BackgroundMesh& now, const SizeFunction& size_fn, double t,
                  int quadrature_order, JacobianTrace& trace) {
    const auto jac = jacobian_field(initial, now, quadrature_order);
    const auto& rule = gauss_rule(quadrature_order);
    double worst = 0.0;
    double sum = 0.0;
    double min_j = std::numeric_limits<double>::infinity();
    for (int e = 0; e < static_cast<int>(now.cell_count()); ++e) {
        const auto corners = cell_corners(now, e);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double j = jac[e * rule.size() + q];
            const Point2 p = eval_bilinear(corners, rule[q].xi, rule[q].eta).position;
            const double dev = std::abs(j / size_fn.f(p, t) - 1.0);
            worst = std::max(worst, dev);
            sum += dev;
            min_j = std::min(min_j, j);
        }
    }
    trace.max_abs_h_minus_1.push_back(worst);
    trace.mean_abs_h_minus_1.push_back(jac.empty() ? 0.0 : sum / static_cast<double>(jac.size()));
    trace.min_jacobian.push_back(min_j);
}

double min_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

}  // namespace

DeformationResult run_deformation(const DeformationPlan& plan) {
    if (plan.n_steps < 1)
        throw Error("number of steps must be at least 1");
    if (plan.targets.size() != plan.selection.pairs.size())
        throw Error("expected one target per selected node");
    const DeformationOptions& opts = plan.options;
    const int order = opts.solver.quadrature_order;
    const int n = plan.n_steps;
    const double dt = 1.0 / n;

    DeformationResult result;
    result.mesh = plan.mesh;
    BackgroundMesh& mesh = result.mesh;
    double min_jacobian = std::numeric_limits<double>::infinity();

    for (int k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / n;
        try {
            SolveStats stats;
            if (opts.integrator == TimeIntegrator::Euler) {
                const auto constraints =
                    dirichlet_velocity(mesh, plan.selection, plan.targets, plan.size_fn, t, n, opts);
                stats = advance_step(mesh, plan.size_fn, constraints, t, dt, opts.solver);
            } else {
                const auto c1 = dirichlet_velocity(mesh, plan.selection, plan.targets, plan.size_fn, t, n, opts);
                const NodeField2 inc1 = step_increment(mesh, plan.size_fn, c1, t, dt, opts.solver, &stats);
                BackgroundMesh half = mesh;
                for (std::size_t i = 0; i < half.node_count(); ++i)
                    half.positions()[i] += 0.5 * inc1[i];
                check_no_inversion(half, order);
                const double t_half = t + 0.5 * dt;
                const auto c2 =
                    dirichlet_velocity(half, plan.selection, plan.targets, plan.size_fn, t_half, n, opts);
                SolveStats stats2;
                const NodeField2 inc2 = step_increment(half, plan.size_fn, c2, t_half, dt, opts.solver, &stats2);
                stats.iterations += stats2.iterations;
                stats.final_residual = std::max(stats.final_residual, stats2.final_residual);
                for (std::size_t i = 0; i < mesh.node_count(); ++i)
                    mesh.positions()[i] += inc2[i];
                check_no_inversion(mesh, order);
            }
            result.step_stats.push_back(stats);
        } catch (const InvertedElementError& e) {
            throw DeformationError("element inversion at step " + std::to_string(k) + ": " + e.what(), k, e.cell());
        } catch (const SolverError& e) {
            throw DeformationError("solver failure at step " + std::to_string(k) + ": " + e.what(), k, -1);
        }
        if (opts.record_trace) {
            record_trace(plan.mesh, mesh, plan.size_fn, static_cast<double>(k + 1) / n, order, result.trace);
            min_jacobian = std::min(min_jacobian, result.trace.min_jacobian.back());
        } else {
            min_jacobian = std::min(min_jacobian, min_of(jacobian_field(plan.mesh, mesh, order)));
        }
    }

    for (std::size_t k = 0; k < plan.selection.pairs.size(); ++k) {
        const int node = mesh.node(plan.selection.pairs[k].node);
        result.max_target_deviation =
            std::max(result.max_target_deviation, distance(mesh.position(node), plan.targets[k]));
    }
    if (!plan.size_fn.uniform && opts.snap_selected) {
        for (std::size_t k = 0; k < plan.selection.pairs.size(); ++k)
            mesh.positions()[mesh.node(plan.selection.pairs[k].node)] = plan.targets[k];
        result.snapped = true;
        try {
            check_no_inversion(mesh, order);
        } catch (const InvertedElementError& e) {
            throw DeformationError(std::string("element inversion after snapping: ") + e.what(), n - 1, e.cell());
        }
    }
    result.min_jacobian = min_jacobian;
    return result;
}

}  // namespace deformesh
