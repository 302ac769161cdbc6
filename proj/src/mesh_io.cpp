#include "deformesh/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "deformesh/svg.hpp"

namespace deformesh {

namespace {

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void validate_as_io(const Contour& c) {
    try {
        validate_contour(c);
    } catch (const GeometryError& e) {
        throw IoError(std::string("invalid contour: ") + e.what());
    }
}

}  // namespace

Contour parse_contour_csv(std::string_view text) {
    Contour c;
    c.closed = true;
    int line_no = 0;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#')
            continue;
        const std::size_t comma = line.find(',');
        double x = 0.0, y = 0.0;
        if (comma == std::string_view::npos || !parse_double(line.substr(0, comma), x) ||
            !parse_double(line.substr(comma + 1), y))
            throw IoError("expected \"x,y\" but got \"" + std::string(line) + "\"", line_no);
        c.points.push_back({x, y});
    }
    validate_as_io(c);
    return c;
}

Contour parse_contour_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // byte offset -> line number
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + upto, '\n'));
        throw IoError(std::string("malformed JSON contour: ") + e.what(), line);
    }
    if (!j.is_object() || !j.contains("points") || !j["points"].is_array())
        throw IoError("JSON contour needs a \"points\" array");
    Contour c;
    c.closed = j.value("closed", true);
    for (std::size_t k = 0; k < j["points"].size(); ++k) {
        const auto& p = j["points"][k];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw IoError("point " + std::to_string(k) + " must be [x, y]");
        c.points.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    validate_as_io(c);
    return c;
}

Contour read_contour(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    const std::string_view body = trim(text);
    if (path.extension() == ".json" || (!body.empty() && body.front() == '{'))
        return parse_contour_json(text);
    return parse_contour_csv(text);
}

MeshFormat parse_mesh_format(std::string_view name) {
    if (name == "vtk")
        return MeshFormat::VtkLegacyAscii;
    if (name == "obj")
        return MeshFormat::Obj;
    if (name == "svg")
        return MeshFormat::Svg;
    throw IoError("unknown mesh format '" + std::string(name) + "' (expected vtk, obj or svg)");
}

std::string to_vtk(const TriMesh& m) {
    std::string out;
    out += "# vtk DataFile Version 3.0\n";
    out += "deformesh triangular mesh\n";
    out += "ASCII\n";
    out += "DATASET UNSTRUCTURED_GRID\n";
    out += "POINTS " + std::to_string(m.nodes.size()) + " double\n";
    for (const Point2& p : m.nodes)
        out += format_double(p.x) + " " + format_double(p.y) + " 0\n";
    out += "CELLS " + std::to_string(m.triangles.size()) + " " + std::to_string(4 * m.triangles.size()) + "\n";
    for (const auto& t : m.triangles)
        out += "3 " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]) + "\n";
    out += "CELL_TYPES " + std::to_string(m.triangles.size()) + "\n";
    for (std::size_t k = 0; k < m.triangles.size(); ++k)
        out += "5\n";  // VTK_TRIANGLE
    if (m.boundary_node_flags.size() == m.nodes.size() && !m.nodes.empty()) {
        out += "POINT_DATA " + std::to_string(m.nodes.size()) + "\n";
        out += "SCALARS boundary_flags int 1\n";
        out += "LOOKUP_TABLE default\n";
        for (std::uint8_t f : m.boundary_node_flags)
            out += std::to_string(static_cast<int>(f)) + "\n";
    }
    return out;
}

std::string to_obj(const TriMesh& m) {
    std::string out = "# deformesh triangular mesh\n";
    for (const Point2& p : m.nodes)
        out += "v " + format_double(p.x) + " " + format_double(p.y) + " 0\n";
    for (const auto& t : m.triangles)
        out += "f " + std::to_string(t[0] + 1) + " " + std::to_string(t[1] + 1) + " " + std::to_string(t[2] + 1) + "\n";
    return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw IoError("failed writing " + path.string());
}

void write_mesh(const TriMesh& m, const std::filesystem::path& path, MeshFormat format, const Contour* contour) {
    switch (format) {
    case MeshFormat::VtkLegacyAscii:
        write_text_file(path, to_vtk(m));
        break;
    case MeshFormat::Obj:
        write_text_file(path, to_obj(m));
        break;
    case MeshFormat::Svg:
        write_text_file(path, trimesh_svg(m, contour));
        break;
    }
}

TriMesh parse_vtk(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string tok;
    TriMesh m;
    auto expect = [&](const std::string& word) {
        while (in >> tok) {
            if (tok == word)
                return;
        }
        throw IoError("VTK file lacks a " + word + " section");
    };
    expect("UNSTRUCTURED_GRID");
    expect("POINTS");
    std::size_t n = 0;
    std::string type;
    if (!(in >> n >> type))
        throw IoError("malformed POINTS header");
    m.nodes.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        double z = 0.0;
        if (!(in >> m.nodes[k].x >> m.nodes[k].y >> z))
            throw IoError("truncated POINTS section");
    }
    expect("CELLS");
    std::size_t cells = 0, total = 0;
    if (!(in >> cells >> total))
        throw IoError("malformed CELLS header");
    for (std::size_t k = 0; k < cells; ++k) {
        int count = 0;
        std::array<int, 3> t{};
        if (!(in >> count) || count != 3 || !(in >> t[0] >> t[1] >> t[2]))
            throw IoError("only triangle cells are supported");
        m.triangles.push_back(t);
    }
    m.boundary_node_flags.assign(n, 0);
    while (in >> tok) {
        if (tok == "LOOKUP_TABLE") {
            in >> tok;
            for (std::size_t k = 0; k < n; ++k) {
                int f = 0;
                if (!(in >> f))
                    throw IoError("truncated POINT_DATA section");
                m.boundary_node_flags[k] = static_cast<std::uint8_t>(f);
            }
            break;
        }
    }
    return m;
}

TriMesh read_vtk(const std::filesystem::path& path) { return parse_vtk(read_text_file(path)); }

}  // namespace deformesh
