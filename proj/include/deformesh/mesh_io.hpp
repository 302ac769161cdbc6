#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "deformesh/geometry.hpp"

namespace deformesh {

/// Reads a contour from CSV ("x,y" per line, implicitly closed; blank lines and
/// '#' comments skipped) or JSON ({"points": [[x, y], ...], "closed": true}).
/// The format is chosen by a ".json" extension or a leading '{'. The result is validated.
Contour read_contour(const std::filesystem::path& path);

Contour parse_contour_csv(std::string_view text);
Contour parse_contour_json(std::string_view text);

enum class MeshFormat { VtkLegacyAscii, Obj, Svg };

MeshFormat parse_mesh_format(std::string_view name);

std::string to_vtk(const TriMesh& m);
std::string to_obj(const TriMesh& m);

/// Writes `m` in the requested format. SVG output overlays `contour` when given.
void write_mesh(const TriMesh& m, const std::filesystem::path& path, MeshFormat format,
                const Contour* contour = nullptr);

/// Reads back the UNSTRUCTURED_GRID triangles written by write_mesh.
TriMesh read_vtk(const std::filesystem::path& path);
TriMesh parse_vtk(std::string_view text);

void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace deformesh
