#pragma once

#include <functional>
#include <vector>

#include "deformesh/seeding.hpp"
#include "deformesh/sparse.hpp"

namespace deformesh {

/// One 2-vector per background-mesh node.
struct NodeField2 {
    std::vector<Vec2> values;

    NodeField2() = default;
    explicit NodeField2(std::size_t n, Vec2 v = {}) : values(n, v) {}
    std::size_t size() const { return values.size(); }
    Vec2& operator[](std::size_t i) { return values[i]; }
    Vec2 operator[](std::size_t i) const { return values[i]; }
};

enum class ConstraintMask { Both, XOnly, YOnly };

struct NodeConstraint {
    int node = 0;
    Vec2 value;
    ConstraintMask mask = ConstraintMask::Both;
};

struct SolverOptions {
    double cg_tol = 1e-10;
    int cg_max_iter = 0;  // 0 selects 10 * (number of free unknowns)
    int quadrature_order = 2;
    int threads = 1;
};

/// Least-squares div-curl problem on the current node positions of `mesh`:
/// minimise the integral of (div U - rhs_div)^2 + (curl U)^2.
struct DivCurlProblem {
    const BackgroundMesh& mesh;
    /// Per quadrature point, cell-major (cell * points_per_cell + q); empty means zero.
    std::vector<double> rhs_div;
    std::vector<NodeConstraint> constraints;
    SolverOptions opts;
};

struct SolveStats {
    int iterations = 0;
    double final_residual = 0.0;
    double functional_value = 0.0;
};

class SolverError : public Error {
public:
    SolverError(const std::string& what, SolveStats stats) : Error(what), stats_(stats) {}
    const SolveStats& stats() const { return stats_; }

private:
    SolveStats stats_;
};

/// A cell whose bilinear map has a non-positive Jacobian at some quadrature point.
class InvertedElementError : public Error {
public:
    InvertedElementError(const std::string& what, int cell, GridIndex index)
        : Error(what), cell_(cell), index_(index) {}
    int cell() const { return cell_; }
    GridIndex index() const { return index_; }

private:
    int cell_;
    GridIndex index_;
};

/// Normal equations restricted to free unknowns. Unknown d = 2 * node + component.
struct LsSystem {
    CsrMatrix matrix;
    std::vector<double> load;
    std::vector<int> free_index;         // per unknown, -1 when constrained
    std::vector<int> free_unknowns;      // free position -> unknown
    std::vector<double> fixed_values;    // per unknown, prescribed value (0 for free)
};

LsSystem assemble_ls_system(const DivCurlProblem& p);

struct DivCurlSolution {
    NodeField2 u;
    SolveStats stats;
};

DivCurlSolution solve_div_curl(const DivCurlProblem& p);

struct DivCurlResidual {
    double l2_div = 0.0;
    double l2_curl = 0.0;
};

/// Quadrature norms ||div U - rhs_div|| and ||curl U||; rhs_div laid out as in DivCurlProblem.
DivCurlResidual eval_div_curl_residual(const BackgroundMesh& mesh, const NodeField2& u,
                                       const std::vector<double>& rhs_div, int quadrature_order = 2);

/// Samples `fn` at the physical quadrature points of every cell (cell-major).
std::vector<double> sample_at_quadrature(const BackgroundMesh& mesh, int quadrature_order,
                                         const std::function<double(Point2)>& fn);

/// L2 norm of (interpolant of U) - exact over the mesh.
double l2_error(const BackgroundMesh& mesh, const NodeField2& u, const std::function<Vec2(Point2)>& exact,
                int quadrature_order = 3);

/// Throws InvertedElementError for the first cell with a non-positive quadrature Jacobian.
void check_no_inversion(const BackgroundMesh& mesh, int quadrature_order = 2);

/// Smallest quadrature-point Jacobian determinant of the current configuration.
double min_quadrature_jacobian(const BackgroundMesh& mesh, int quadrature_order = 2);

std::array<Point2, 4> cell_corners(const BackgroundMesh& mesh, int cell);

}  // namespace deformesh
