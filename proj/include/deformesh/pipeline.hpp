#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "deformesh/deformation.hpp"
#include "deformesh/extraction.hpp"
#include "deformesh/mesh_io.hpp"

namespace deformesh {

struct SizeSpec {
    /// Used when `f_expr` is empty.
    double constant = 1.0;
    std::string f_expr;
    std::string dgdt_expr;  // d(1/f)/dt; required with f_expr unless finite_difference
    bool finite_difference = false;
};

SizeFunction make_size_function(const SizeSpec& spec);

struct RunConfig {
    std::filesystem::path contour_path;
    std::optional<BoundingBox> bbox;  // default: contour bounding box
    std::optional<double> h;          // default: auto_grid_spacing
    int margin_cells = 2;
    int n_steps = 10;
    SizeSpec size;
    Region region = Region::Interior;
    OuterBoundary outer = OuterBoundary::ZeroDirichlet;
    TimeIntegrator integrator = TimeIntegrator::Euler;
    SolverOptions solver;
    std::filesystem::path out_path;
    MeshFormat format = MeshFormat::VtkLegacyAscii;
    std::filesystem::path svg_path;     // four-panel figure
    std::filesystem::path report_path;
    bool seed_only = false;
    bool trace_jacobian = false;
};

/// Throws Error on inconsistent settings.
void validate_config(const RunConfig& cfg);

/// Intermediate products, filled as far as the pipeline got.
struct PipelineArtifacts {
    std::optional<Contour> contour;
    std::optional<BackgroundMesh> background;
    std::optional<SelectionResult> selection;
    std::optional<DeformationResult> deformation;
    std::optional<ExtractedRegion> region;
    std::optional<TriMesh> mesh;
    std::optional<QualityReport> quality;
};

struct PipelineResult {
    int exit_code = 0;
    std::string stage;    // failing stage, empty on success
    std::string message;  // error text, empty on success
    nlohmann::json report;
    PipelineArtifacts artifacts;
};

/// read_contour -> grid -> select_nodes -> run_deformation -> classify/extract ->
/// triangulate -> outputs. Never throws; failures come back stage-tagged.
PipelineResult run_pipeline(const RunConfig& cfg);

/// Selected pairs as JSON: [{"contour_index": k, "node": [i, j], "grid_point": [x, y], "target": [x, y]}, ...].
nlohmann::json selection_json(const BackgroundMesh& mesh, const Contour& c, const SelectionResult& sel);

inline constexpr const char* kReportSchema = "deformesh.report/1";

}  // namespace deformesh
