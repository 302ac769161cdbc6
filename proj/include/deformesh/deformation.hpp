#pragma once

#include <functional>
#include <span>
#include <vector>

#include "deformesh/divcurl.hpp"
#include "deformesh/seeding.hpp"

namespace deformesh {

/// Positive size function f(p, t) with the time derivative of g = 1/f.
struct SizeFunction {
    std::function<double(Point2, double)> f;
    std::function<double(Point2, double)> dgdt;
    /// f is the same constant everywhere and at all times.
    bool uniform = false;

    static SizeFunction constant(double value);
    static SizeFunction with_derivative(std::function<double(Point2, double)> f,
                                        std::function<double(Point2, double)> dgdt);
    /// dg/dt by central differences of 1/f with step `delta`.
    static SizeFunction finite_difference(std::function<double(Point2, double)> f, double delta = 1e-6);
};

enum class OuterBoundary {
    ZeroDirichlet,  // U = 0 on the outer rectangle
    ZeroNormal,     // only the normal component of U vanishes there
    Prescribed,     // U given by DeformationOptions::outer_velocity (test mode)
};

enum class TimeIntegrator { Euler, Midpoint };

struct DeformationOptions {
    OuterBoundary outer = OuterBoundary::ZeroDirichlet;
    /// Velocity (per unit time) imposed on outer nodes in Prescribed mode.
    std::function<Vec2(Point2, double)> outer_velocity;
    TimeIntegrator integrator = TimeIntegrator::Euler;
    SolverOptions solver;
    bool record_trace = false;
    /// Move selected nodes exactly onto their targets after the last step when f is not uniform.
    bool snap_selected = true;
};

struct DeformationPlan {
    BackgroundMesh mesh;  // initial configuration, selection already applied
    SelectionResult selection;
    std::vector<Point2> targets;  // Q_k for each entry of selection.pairs
    int n_steps = 10;
    SizeFunction size_fn = SizeFunction::constant(1.0);
    DeformationOptions options;
};

/// Per-step statistics of H = J / f at the quadrature points after the step.
struct JacobianTrace {
    std::vector<double> max_abs_h_minus_1;
    std::vector<double> mean_abs_h_minus_1;
    std::vector<double> min_jacobian;
};

struct DeformationResult {
    BackgroundMesh mesh;
    JacobianTrace trace;
    std::vector<SolveStats> step_stats;
    /// Largest distance between a selected node and its target before any snap.
    double max_target_deviation = 0.0;
    bool snapped = false;
    /// Smallest deformation Jacobian seen at any quadrature point after any step.
    double min_jacobian = 0.0;
};

/// Inversion or solver failure during step `step` (0-based).
class DeformationError : public Error {
public:
    DeformationError(const std::string& what, int step, int cell) : Error(what), step_(step), cell_(cell) {}
    int step() const { return step_; }
    int cell() const { return cell_; }  // -1 when not an inversion

private:
    int step_;
    int cell_;
};

// Constraint values and solved fields are per-step increments: over a step of
// length dt = 1/n a node carrying U moves by f U. A true velocity w therefore
// enters as the increment dt * w.

/// (Q - P) / (n f): the increment that walks P to Q in n equal steps when f = 1.
Vec2 dirichlet_vector(Point2 p, Point2 q, double f, int n_steps);

/// Constraints for one solve: selected nodes get dirichlet_vector with f at their
/// current position and time t, outer-rectangle nodes follow `options.outer`.
std::vector<NodeConstraint> dirichlet_velocity(const BackgroundMesh& mesh, const SelectionResult& sel,
                                               std::span<const Point2> targets, const SizeFunction& size_fn,
                                               double t, int n_steps, const DeformationOptions& options = {});

/// Node displacement f U over one step, with U from the div-curl solve on the
/// current positions and rhs -dt * d(1/f)/dt.
NodeField2 step_increment(const BackgroundMesh& mesh, const SizeFunction& size_fn,
                          const std::vector<NodeConstraint>& constraints, double t, double dt,
                          const SolverOptions& opts, SolveStats* stats = nullptr);

/// One explicit Euler step of the node positions. Throws InvertedElementError when a
/// cell inverts.
SolveStats advance_step(BackgroundMesh& mesh, const SizeFunction& size_fn,
                        const std::vector<NodeConstraint>& constraints, double t, double dt,
                        const SolverOptions& opts = {});

DeformationResult run_deformation(const DeformationPlan& plan);

/// det grad(phi) at every quadrature point (cell-major), phi mapping `before` onto `now`.
std::vector<double> jacobian_field(const BackgroundMesh& before, const BackgroundMesh& now, int quadrature_order = 2);

}  // namespace deformesh
