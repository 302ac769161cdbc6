#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "deformesh/error.hpp"
#include "deformesh/expression.hpp"
#include "deformesh/pipeline.hpp"
#include "support.hpp"

using namespace deformesh;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("deformesh_pipeline_" + name);
}

RunConfig circle_config() {
    RunConfig cfg;
    cfg.contour_path = testing::data_path("circle32.csv");
    return cfg;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("expression parser") {
    CHECK(Expression::parse("1 + 2 * 3")(0, 0, 0) == 7.0);
    CHECK(Expression::parse("2^3^2")(0, 0, 0) == 512.0);
    CHECK(Expression::parse("-x^2")(3, 0, 0) == -9.0);
    CHECK(Expression::parse("sin(pi * x) + y * t")(0.5, 2, 3) == doctest::Approx(7.0));
    CHECK(Expression::parse("sqrt(abs(-16)) / exp(0) - log(1) + tanh(0) + cos(0) + tan(0)")(0, 0, 0) == 5.0);
    CHECK_THROWS_WITH_AS(Expression::parse("1 + * 2"), doctest::Contains("column 5"), ExpressionError);
    CHECK_THROWS_AS(Expression::parse("foo(x)"), ExpressionError);
    CHECK_THROWS_AS(Expression::parse("(x + 1"), ExpressionError);
}

TEST_CASE("size function specs") {
    SizeSpec s;
    s.f_expr = "1 + 0.1 * t * x";
    CHECK_THROWS_AS(make_size_function(s), Error);
    s.finite_difference = true;
    const SizeFunction fd = make_size_function(s);
    s.finite_difference = false;
    s.dgdt_expr = "-0.1 * x / (1 + 0.1 * t * x)^2";
    const SizeFunction exact = make_size_function(s);
    CHECK(fd.dgdt({0.6, 0.0}, 0.5) == doctest::Approx(exact.dgdt({0.6, 0.0}, 0.5)).epsilon(1e-6));
    CHECK(make_size_function(SizeSpec{}).uniform);
}

TEST_CASE("circle fixture end to end") {
    RunConfig cfg = circle_config();
    cfg.trace_jacobian = true;
    const PipelineResult r = run_pipeline(cfg);
    REQUIRE(r.exit_code == 0);
    CHECK(r.report["status"] == "ok");
    CHECK(r.report["schema"] == kReportSchema);
    CHECK(r.report["quality"]["inverted_count"] == 0);
    CHECK(r.report["counts"]["selected"] == 32);
    CHECK(r.report["counts"]["unmatched"].empty());
    CHECK(r.report["counts"]["triangles"].get<int>() == 2 * r.report["counts"]["kept_quads"].get<int>());
    CHECK(r.report["jacobian_trace"]["max_abs_h_minus_1"].size() == 10);
    CHECK(r.report["deformation"]["max_target_deviation"].get<double>() < 1e-9);
    CHECK(r.report["solver"]["total_iterations"].get<int>() > 0);
}

TEST_CASE("exterior region") {
    RunConfig cfg = circle_config();
    cfg.region = Region::Exterior;
    const PipelineResult r = run_pipeline(cfg);
    REQUIRE(r.exit_code == 0);
    const TriMesh& m = *r.artifacts.mesh;
    CHECK(quality_report(m).inverted_count == 0);
    // Annulus: the origin is not covered by any triangle.
    for (const auto& t : m.triangles) {
        const Point2 c = (m.nodes[t[0]] + m.nodes[t[1]] + m.nodes[t[2]]) / 3.0;
        CHECK(norm(c) > 0.8);
    }
}

TEST_CASE("denser circle keeps every contour point in the mesh") {
    const auto path = temp_file("circle64.csv");
    {
        std::ofstream out(path);
        out.precision(17);
        for (const Point2& p : testing::circle(64).points)
            out << p.x << "," << p.y << "\n";
    }
    RunConfig cfg;
    cfg.contour_path = path;
    const PipelineResult r = run_pipeline(cfg);
    std::filesystem::remove(path);
    REQUIRE(r.exit_code == 0);
    CHECK(r.report["counts"]["contour_points_in_mesh"] == 64);
}

TEST_CASE("stage-tagged failures") {
    SUBCASE("contour touching the grid outer boundary") {
        RunConfig cfg;
        cfg.contour_path = testing::data_path("unit_square.csv");
        cfg.bbox = BoundingBox{{0, 0}, {1, 1}};
        cfg.h = 0.25;
        cfg.margin_cells = 0;
        const PipelineResult r = run_pipeline(cfg);
        CHECK(r.exit_code != 0);
        CHECK(r.stage == "seeding");
        CHECK(r.report["status"] == "error");
    }
    SUBCASE("missing file") {
        RunConfig cfg;
        cfg.contour_path = testing::data_path("nope.csv");
        const PipelineResult r = run_pipeline(cfg);
        CHECK(r.exit_code != 0);
        CHECK(r.stage == "read_contour");
    }
    SUBCASE("bad config") {
        RunConfig cfg = circle_config();
        cfg.n_steps = 0;
        CHECK(run_pipeline(cfg).stage == "config");
    }
}

TEST_CASE("seed-only run reports the pairs") {
    RunConfig cfg;
    cfg.contour_path = testing::data_path("replica.csv");
    cfg.seed_only = true;
    const PipelineResult r = run_pipeline(cfg);
    REQUIRE(r.exit_code == 0);
    CHECK(r.report["selection"].size() == 24);
    CHECK_FALSE(r.artifacts.deformation.has_value());
}

TEST_CASE("outputs are byte-identical across runs") {
    std::string first_mesh, first_svg, first_report;
    for (int k = 0; k < 2; ++k) {
        RunConfig cfg;
        cfg.contour_path = testing::data_path("replica.csv");
        cfg.out_path = temp_file("det.vtk");
        cfg.svg_path = temp_file("det.svg");
        cfg.report_path = temp_file("det.json");
        REQUIRE(run_pipeline(cfg).exit_code == 0);
        const std::string mesh = slurp(cfg.out_path), svg = slurp(cfg.svg_path), report = slurp(cfg.report_path);
        if (k == 0) {
            first_mesh = mesh;
            first_svg = svg;
            first_report = report;
        } else {
            CHECK(mesh == first_mesh);
            CHECK(svg == first_svg);
            CHECK(report == first_report);
        }
        for (const auto& p : {cfg.out_path, cfg.svg_path, cfg.report_path})
            std::filesystem::remove(p);
    }
    CHECK_FALSE(first_mesh.empty());
}

TEST_CASE("varying size function through the pipeline") {
    RunConfig cfg = circle_config();
    cfg.size.f_expr = "1 / (1 + 0.2 * t * x)";
    cfg.size.dgdt_expr = "0.2 * x";
    cfg.outer = OuterBoundary::ZeroNormal;
    cfg.integrator = TimeIntegrator::Midpoint;
    const PipelineResult r = run_pipeline(cfg);
    REQUIRE(r.exit_code == 0);
    CHECK(r.report["deformation"]["snapped"] == true);
    CHECK(r.report["quality"]["inverted_count"] == 0);
}

}
