#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "deformesh/error.hpp"
#include "deformesh/mesh_io.hpp"
#include "support.hpp"

using namespace deformesh;

namespace {

TriMesh two_triangle_square() {
    TriMesh m;
    m.nodes = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    m.triangles = {{0, 1, 2}, {0, 2, 3}};
    m.boundary_node_flags = {1, 3, 1, 3};
    return m;
}

int count_prefix(const std::string& text, const std::string& prefix) {
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line))
        n += line.rfind(prefix, 0) == 0;
    return n;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("deformesh_test_" + name);
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("CSV and JSON unit squares") {
    for (const char* name : {"unit_square.csv", "unit_square.json"}) {
        const Contour c = read_contour(testing::data_path(name));
        CHECK(c.closed);
        REQUIRE(c.size() == 4);
        CHECK(c.points[2] == Point2{1, 1});
    }
}

TEST_CASE("fixture files") {
    const Contour replica = read_contour(testing::data_path("replica.csv"));
    CHECK(replica.size() == 24);
    for (int k = 18; k < 24; ++k)
        CHECK(replica.points[k].x == 1.0);
    CHECK(read_contour(testing::data_path("circle32.csv")).size() == 32);
}

TEST_CASE("contour errors") {
    CHECK_THROWS_WITH_AS(read_contour(testing::data_path("malformed.csv")), doctest::Contains("(line 3)"), IoError);
    CHECK_THROWS_WITH_AS(read_contour(testing::data_path("duplicate_consecutive.csv")),
                         doctest::Contains("invalid contour"), IoError);
    CHECK_THROWS_AS(read_contour(testing::data_path("bowtie.csv")), IoError);
    CHECK_THROWS_AS(read_contour(testing::data_path("does_not_exist.csv")), IoError);
    CHECK_THROWS_WITH_AS(parse_contour_json("{\"points\": [[0, 0], [1, 0],\n [1 1]]}"), doctest::Contains("line 2"),
                         IoError);
    CHECK_THROWS_AS(parse_contour_json("{\"points\": [[0, 0], [1], [1, 1]]}"), IoError);
}

TEST_CASE("CSV comments, blank lines and explicit signs") {
    const Contour c = parse_contour_csv("# header\n\n0,0\n+2, 0\n 1 ,1.5e0\n");
    REQUIRE(c.size() == 3);
    CHECK(c.points[1] == Point2{2, 0});
    CHECK(c.points[2] == Point2{1, 1.5});
}

TEST_CASE("VTK and OBJ writers") {
    const TriMesh m = two_triangle_square();
    const std::string vtk = to_vtk(m);
    CHECK(vtk.find("POINTS 4 double") != std::string::npos);
    CHECK(vtk.find("CELLS 2 8") != std::string::npos);
    CHECK(vtk.find("CELL_TYPES 2") != std::string::npos);
    const std::string obj = to_obj(m);
    CHECK(count_prefix(obj, "v ") == 4);
    CHECK(count_prefix(obj, "f ") == 2);
    CHECK(obj.find("f 1 3 4") != std::string::npos);
}

TEST_CASE("VTK round trip") {
    TriMesh m = two_triangle_square();
    m.nodes[2] = {1.0 / 3.0, 0.1 + 0.2};
    const auto path = temp_file("roundtrip.vtk");
    write_mesh(m, path, MeshFormat::VtkLegacyAscii);
    const TriMesh back = read_vtk(path);
    std::filesystem::remove(path);
    REQUIRE(back.nodes.size() == m.nodes.size());
    for (std::size_t k = 0; k < m.nodes.size(); ++k)
        CHECK(distance(back.nodes[k], m.nodes[k]) <= 1e-12);
    CHECK(back.triangles == m.triangles);
    CHECK(back.boundary_node_flags == m.boundary_node_flags);
}

TEST_CASE("SVG mesh output and format names") {
    const TriMesh m = two_triangle_square();
    const auto path = temp_file("mesh.svg");
    const Contour sq = testing::unit_square();
    write_mesh(m, path, MeshFormat::Svg, &sq);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::filesystem::remove(path);
    CHECK(ss.str().rfind("<svg", 0) == 0);
    CHECK(ss.str().find("#1f4fd1") != std::string::npos);
    CHECK(parse_mesh_format("obj") == MeshFormat::Obj);
    CHECK_THROWS_AS(parse_mesh_format("stl"), IoError);
}

}
