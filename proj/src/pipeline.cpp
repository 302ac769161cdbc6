#include "deformesh/pipeline.hpp"

#include <algorithm>

#include "deformesh/expression.hpp"
#include "deformesh/svg.hpp"

namespace deformesh {

SizeFunction make_size_function(const SizeSpec& spec) {
    if (spec.f_expr.empty())
        return SizeFunction::constant(spec.constant);
    const Expression f = Expression::parse(spec.f_expr);
    auto f_fn = [f](Point2 p, double t) { return f(p.x, p.y, t); };
    if (!spec.dgdt_expr.empty())
        return SizeFunction::with_derivative(f_fn, [g = Expression::parse(spec.dgdt_expr)](Point2 p, double t) {
            return g(p.x, p.y, t);
        });
    if (!spec.finite_difference)
        throw Error("a size-function expression needs its d(1/f)/dt expression or the finite-difference flag");
    return SizeFunction::finite_difference(f_fn);
}

void validate_config(const RunConfig& cfg) {
    if (cfg.contour_path.empty())
        throw Error("no contour path given");
    if (cfg.n_steps < 1)
        throw Error("number of steps must be at least 1");
    if (cfg.h && !(*cfg.h > 0.0))
        throw Error("grid spacing must be positive");
    if (cfg.margin_cells < 0)
        throw Error("margin must be non-negative");
    if (cfg.bbox && !(cfg.bbox->width() > 0.0 && cfg.bbox->height() > 0.0))
        throw Error("bounding box must have positive extent");
    if (cfg.outer == OuterBoundary::Prescribed)
        throw Error("prescribed outer velocity is a library test mode, not a pipeline option");
}

nlohmann::json selection_json(const BackgroundMesh& mesh, const Contour& c, const SelectionResult& sel) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const SelectedPair& p : sel.pairs) {
        const Point2 g = mesh.grid_point(p.node.i, p.node.j);
        const Point2 q = c.points[p.contour_index];
        pairs.push_back({{"contour_index", p.contour_index},
                         {"node", {p.node.i, p.node.j}},
                         {"grid_point", {g.x, g.y}},
                         {"target", {q.x, q.y}}});
    }
    return pairs;
}

namespace {

const char* region_name(Region r) { return r == Region::Interior ? "interior" : "exterior"; }

struct StageError {
    std::string stage;
    std::string message;
};

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const std::exception& e) {
        throw StageError{name, e.what()};
    }
}

void fill_report(const RunConfig& cfg, const PipelineArtifacts& a, nlohmann::json& r) {
    r["config"] = {{"contour", cfg.contour_path.string()},
                   {"n_steps", cfg.n_steps},
                   {"region", region_name(cfg.region)},
                   {"auto_h", !cfg.h.has_value()},
                   {"margin_cells", cfg.margin_cells}};
    nlohmann::json counts = nlohmann::json::object();
    if (a.contour)
        counts["contour_points"] = a.contour->size();
    if (a.background) {
        const BackgroundMesh& m = *a.background;
        r["grid"] = {{"nx", m.nx()}, {"ny", m.ny()}, {"h", m.h()}, {"origin", {m.origin().x, m.origin().y}}};
        counts["background_nodes"] = m.node_count();
    }
    if (a.selection) {
        counts["selected"] = a.selection->pairs.size();
        counts["unmatched"] = a.selection->unmatched;
        counts["conflicts"] = a.selection->conflicts;
        counts["max_points_per_cell"] = a.selection->max_points_per_cell;
    }
    if (a.region)
        counts["kept_quads"] = a.region->quads.size();
    if (a.mesh) {
        counts["mesh_nodes"] = a.mesh->nodes.size();
        counts["triangles"] = a.mesh->triangles.size();
        counts["contour_points_in_mesh"] = std::count_if(
            a.mesh->boundary_node_flags.begin(), a.mesh->boundary_node_flags.end(),
            [](std::uint8_t f) { return (f & node_flags::kContour) != 0; });
    }
    r["counts"] = counts;
    if (a.quality) {
        const QualityReport& q = *a.quality;
        r["quality"] = {{"min_angle", q.min_angle},
                        {"max_angle", q.max_angle},
                        {"min_signed_area", q.min_signed_area},
                        {"aspect_ratio_worst", q.aspect_ratio_worst},
                        {"inverted_count", q.inverted_count}};
    }
    if (a.deformation) {
        const DeformationResult& d = *a.deformation;
        r["deformation"] = {{"steps", d.step_stats.size()},
                            {"max_target_deviation", d.max_target_deviation},
                            {"snapped", d.snapped},
                            {"min_jacobian", d.min_jacobian}};
        int total = 0, worst = 0;
        double residual = 0.0, functional = 0.0;
        for (const SolveStats& s : d.step_stats) {
            total += s.iterations;
            worst = std::max(worst, s.iterations);
            residual = std::max(residual, s.final_residual);
            functional = std::max(functional, s.functional_value);
        }
        r["solver"] = {{"total_iterations", total},
                       {"max_iterations", worst},
                       {"max_final_residual", residual},
                       {"max_functional_value", functional}};
        if (cfg.trace_jacobian) {
            const JacobianTrace& t = d.trace;
            r["jacobian_trace"] = {{"max_abs_h_minus_1", t.max_abs_h_minus_1},
                                   {"mean_abs_h_minus_1", t.mean_abs_h_minus_1},
                                   {"min_jacobian", t.min_jacobian},
                                   {"final_max_abs_h_minus_1",
                                    t.max_abs_h_minus_1.empty() ? 0.0 : t.max_abs_h_minus_1.back()}};
        }
    }
}

void execute(const RunConfig& cfg, PipelineArtifacts& a, nlohmann::json& report) {
    stage("config", [&] { validate_config(cfg); });
    const SizeFunction size_fn = stage("config", [&] { return make_size_function(cfg.size); });

    a.contour = stage("read_contour", [&] { return read_contour(cfg.contour_path); });
    const Contour& contour = *a.contour;
    if (!contour.closed)
        throw StageError{"read_contour", "meshing requires a closed contour"};

    a.background = stage("seeding", [&] {
        const double h = cfg.h ? *cfg.h : auto_grid_spacing(contour);
        const BoundingBox box = cfg.bbox ? *cfg.bbox : bounding_box(contour.points);
        return build_background_mesh(box, h, cfg.margin_cells);
    });
    a.selection = stage("seeding", [&] { return select_nodes(*a.background, contour); });
    stage("seeding", [&] { apply_selection(*a.background, *a.selection); });
    if (cfg.seed_only) {
        report["selection"] = selection_json(*a.background, contour, *a.selection);
        return;
    }

    a.deformation = stage("deformation", [&] {
        DeformationPlan plan;
        plan.mesh = *a.background;
        plan.selection = *a.selection;
        for (const SelectedPair& p : a.selection->pairs)
            plan.targets.push_back(contour.points[p.contour_index]);
        plan.n_steps = cfg.n_steps;
        plan.size_fn = size_fn;
        plan.options.outer = cfg.outer;
        plan.options.integrator = cfg.integrator;
        plan.options.solver = cfg.solver;
        plan.options.record_trace = cfg.trace_jacobian;
        return run_deformation(plan);
    });

    const double eps_b = default_boundary_tolerance(contour);
    a.region = stage("extraction", [&] {
        const auto classes = classify_nodes(a.deformation->mesh, contour, eps_b);
        return extract_region(a.deformation->mesh, classes, cfg.region, contour, eps_b);
    });
    a.mesh = stage("triangulation", [&] { return triangulate_quads(*a.region); });
    a.quality = quality_report(*a.mesh);

    stage("output", [&] {
        if (!cfg.out_path.empty())
            write_mesh(*a.mesh, cfg.out_path, cfg.format, &contour);
        if (!cfg.svg_path.empty())
            write_text_file(cfg.svg_path, figure_svg({*a.background, *a.selection, a.deformation->mesh, contour,
                                                      *a.region, *a.mesh}));
    });
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& cfg) {
    PipelineResult result;
    nlohmann::json& report = result.report;
    report["schema"] = kReportSchema;
    try {
        execute(cfg, result.artifacts, report);
        report["status"] = "ok";
    } catch (const StageError& e) {
        result.exit_code = 1;
        result.stage = e.stage;
        result.message = e.message;
        report["status"] = "error";
        report["stage"] = e.stage;
        report["message"] = e.message;
    }
    fill_report(cfg, result.artifacts, report);
    if (!cfg.report_path.empty()) {
        try {
            write_text_file(cfg.report_path, report.dump(2) + "\n");
        } catch (const std::exception& e) {
            if (result.exit_code == 0) {
                result.exit_code = 1;
                result.stage = "output";
                result.message = e.what();
            }
        }
    }
    return result;
}

}  // namespace deformesh
