#pragma once

#include <iosfwd>
#include <string>

#include "afem/mesh.hpp"

namespace afem {

// Mesh text format: a header line "N NT", then N lines "x y", then NT
// lines "v1 v2 v3" with 1-based vertex indices.
Mesh read_mesh_text(std::istream& in);
Mesh read_mesh_text_file(const std::string& path);
void write_mesh_text(const Mesh& mesh, std::ostream& out);
void write_mesh_text_file(const Mesh& mesh, const std::string& path);

// SVG snapshot: one polyline per edge, viewBox equal to the mesh bounding
// box (y flipped so the picture matches the usual orientation).
void export_mesh_svg(const Mesh& mesh, std::ostream& out);
void export_mesh_svg(const Mesh& mesh, const std::string& path);

}  // namespace afem
