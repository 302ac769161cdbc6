#include <doctest.h>

#include <cmath>
#include <numbers>

#include "deformesh/deformation.hpp"
#include "deformesh/divcurl.hpp"
#include "support.hpp"

using namespace deformesh;

namespace {

BackgroundMesh unit_grid(int cells) { return BackgroundMesh({0, 0}, 1.0 / cells, cells + 1, cells + 1); }

// One selected node at grid (i, j) heading for q.
DeformationPlan single_node_plan(int cells, GridIndex g, Point2 q, int n) {
    DeformationPlan plan;
    plan.mesh = unit_grid(cells);
    plan.selection.pairs = {{g, 0}};
    apply_selection(plan.mesh, plan.selection);
    plan.targets = {q};
    plan.n_steps = n;
    return plan;
}

double g_bump(Point2 p, double t) {
    return 1.0 + 0.3 * t * std::sin(2 * std::numbers::pi * p.x) * std::sin(std::numbers::pi * p.y);
}

}  // namespace

TEST_SUITE("deformation") {

TEST_CASE("dirichlet_vector") {
    const Vec2 v = dirichlet_vector({1, 4}, {1, 3}, 1.0, 10);
    CHECK(v.x == 0.0);
    CHECK(v.y == doctest::Approx(-0.1).epsilon(1e-15));
    CHECK(dirichlet_vector({1, 4}, {1, 3}, 2.0, 10).y == doctest::Approx(-0.05).epsilon(1e-15));
    CHECK(dirichlet_vector({1, 4}, {1, 4}, 1.0, 10) == Vec2{});
}

TEST_CASE("size function constructors") {
    CHECK_THROWS(SizeFunction::constant(0.0));
    CHECK(SizeFunction::constant(2.0).uniform);
    // f = 1 / (1 + t x): d(1/f)/dt = x
    const SizeFunction fd = SizeFunction::finite_difference([](Point2 p, double t) { return 1.0 / (1.0 + t * p.x); });
    CHECK_FALSE(fd.uniform);
    CHECK(fd.dgdt({0.7, 0.2}, 0.4) == doctest::Approx(0.7).epsilon(1e-6));
}

TEST_CASE("advance_step with zero data leaves the mesh alone") {
    BackgroundMesh m = unit_grid(6);
    const auto before = m.positions();
    const auto constraints = dirichlet_velocity(m, {}, {}, SizeFunction::constant(1.0), 0.0, 10);
    advance_step(m, SizeFunction::constant(1.0), constraints, 0.0, 0.1);
    CHECK(m.positions() == before);
}

TEST_CASE("prescribed constant outer velocity translates every node") {
    BackgroundMesh m = unit_grid(6);
    const auto before = m.positions();
    const Vec2 c{0.4, -0.2};
    DeformationOptions opts;
    opts.outer = OuterBoundary::Prescribed;
    opts.outer_velocity = [c](Point2, double) { return c; };
    const auto constraints = dirichlet_velocity(m, {}, {}, SizeFunction::constant(1.0), 0.0, 10, opts);
    advance_step(m, SizeFunction::constant(1.0), constraints, 0.0, 0.1);
    for (std::size_t n = 0; n < before.size(); ++n)
        CHECK(norm(m.positions()[n] - (before[n] + 0.1 * c)) < 1e-12);
}

TEST_CASE("selected node takes one tenth of its path per step") {
    const Point2 q{0.55, 0.42};
    const DeformationPlan plan = single_node_plan(8, {4, 4}, q, 10);
    BackgroundMesh m = plan.mesh;
    const Point2 p = m.grid_point(4, 4);
    const int node = m.node(4, 4);
    for (int k = 0; k < 10; ++k) {
        const Point2 prev = m.position(node);
        const auto c = dirichlet_velocity(m, plan.selection, plan.targets, plan.size_fn, k / 10.0, 10);
        advance_step(m, plan.size_fn, c, k / 10.0, 0.1);
        CHECK(norm(m.position(node) - prev - (q - p) / 10.0) < 1e-14);
    }
    CHECK(distance(m.position(node), q) < 1e-12);
}

TEST_CASE("identity run") {
    DeformationPlan plan = single_node_plan(10, {3, 6}, {0.3, 0.6}, 10);
    plan.targets = {plan.mesh.grid_point(3, 6)};
    const DeformationResult r = run_deformation(plan);
    for (std::size_t n = 0; n < r.mesh.node_count(); ++n)
        CHECK(distance(r.mesh.positions()[n], plan.mesh.positions()[n]) <= 1e-12);
    CHECK(r.step_stats.size() == 10);
}

TEST_CASE("run_deformation lands selected nodes and is deterministic") {
    const Contour c = testing::circle(24, 0.35, {0.5, 0.5});
    DeformationPlan plan;
    plan.mesh = build_background_mesh(bounding_box(c.points), auto_grid_spacing(c), 2);
    plan.selection = select_nodes(plan.mesh, c);
    apply_selection(plan.mesh, plan.selection);
    for (const SelectedPair& p : plan.selection.pairs)
        plan.targets.push_back(c.points[p.contour_index]);
    const DeformationResult a = run_deformation(plan);
    const DeformationResult b = run_deformation(plan);
    CHECK(a.max_target_deviation < 1e-9);
    CHECK_FALSE(a.snapped);
    CHECK(a.min_jacobian > 0.0);
    CHECK(a.mesh.positions() == b.mesh.positions());

    plan.options.integrator = TimeIntegrator::Midpoint;
    const DeformationResult mid = run_deformation(plan);
    CHECK(mid.max_target_deviation < 1e-9);
    CHECK(mid.min_jacobian > 0.0);
}

TEST_CASE("folding is reported with the step") {
    DeformationPlan plan = single_node_plan(4, {2, 2}, {0.5, 0.5}, 1);
    plan.targets = {{1.4, 0.5}};  // through the neighbouring nodes in one step
    CHECK_THROWS_AS(run_deformation(plan), DeformationError);
    try {
        run_deformation(plan);
    } catch (const DeformationError& e) {
        CHECK(e.step() == 0);
        CHECK(std::string(e.what()).find("element inversion at step 0") != std::string::npos);
    }
}

TEST_CASE("jacobian_field of simple maps") {
    const BackgroundMesh before = unit_grid(4);
    BackgroundMesh now = before;
    for (double j : jacobian_field(before, now))
        CHECK(j == doctest::Approx(1.0));
    for (auto& p : now.positions())
        p = 2.0 * p;
    for (double j : jacobian_field(before, now))
        CHECK(j == doctest::Approx(4.0));
    now = before;
    for (auto& p : now.positions())
        p = {p.x + 0.5 * p.y, p.y};
    for (double j : jacobian_field(before, now))
        CHECK(j == doctest::Approx(1.0));
}

TEST_CASE("J / f stays near one for a varying size function") {
    // f = 1 / g with g = 1 + 0.3 t sin(2 pi x) sin(pi y); zero mean, so the domain is preserved.
    auto run = [](int cells, int n, const SizeFunction& s) {
        DeformationPlan plan;
        plan.mesh = unit_grid(cells);
        plan.n_steps = n;
        plan.size_fn = s;
        plan.options.outer = OuterBoundary::ZeroNormal;
        plan.options.record_trace = true;
        return run_deformation(plan);
    };
    const auto f = [](Point2 p, double t) { return 1.0 / g_bump(p, t); };
    const SizeFunction exact = SizeFunction::with_derivative(f, [](Point2 p, double) {
        return 0.3 * std::sin(2 * std::numbers::pi * p.x) * std::sin(std::numbers::pi * p.y);
    });
    const DeformationResult coarse = run(8, 10, exact);
    const DeformationResult fine = run(16, 20, exact);
    const double e0 = coarse.trace.max_abs_h_minus_1.back();
    const double e1 = fine.trace.max_abs_h_minus_1.back();
    MESSAGE("max |H - 1|: " << e0 << " -> " << e1);
    CHECK(e1 < e0);
    CHECK(e1 < 0.05);
    CHECK(fine.trace.max_abs_h_minus_1.size() == 20);

    const DeformationResult by_fd = run(8, 10, SizeFunction::finite_difference(f));
    CHECK(by_fd.trace.max_abs_h_minus_1.back() == doctest::Approx(e0).epsilon(1e-4));
}

}
