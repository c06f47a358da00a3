#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace afem {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point midpoint(const Point& a, const Point& b) {
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

inline double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Axis-aligned rectangle [x1,x2] x [y1,y2].
struct Rect {
  double x1 = 0.0, x2 = 1.0, y1 = 0.0, y2 = 1.0;
};

// Triangle mesh: vertex coordinates plus counterclockwise connectivity.
// Indices are 0-based in memory; every file format is 1-based.
struct Mesh {
  std::vector<Point> node;
  std::vector<std::array<int, 3>> elem;

  int num_nodes() const { return static_cast<int>(node.size()); }
  int num_elements() const { return static_cast<int>(elem.size()); }
};

double signed_area(const Point& a, const Point& b, const Point& c);
double element_area(const Mesh& mesh, int t);

// Throws Error if any vertex index is out of range or any triangle is
// degenerate or clockwise.
void validate(const Mesh& mesh);

// Structured triangulation of the rectangle. h1/h2 are target cell sizes;
// the cell counts are rounded to the nearest integer and must be >= 1.
// Each cell is split along its lower-left to upper-right diagonal, and the
// diagonal is emitted as each triangle's first side so that the refinement
// edges of paired cells coincide (the convention bisect() expects).
Mesh square_mesh(const Rect& rect, double h1, double h2);

// Rotate each element's vertex order so its longest side becomes side 1
// (the refinement edge). Orientation is preserved. Used to prepare meshes
// that did not come out of square_mesh or bisect.
Mesh label_longest_edge(const Mesh& mesh);

// Mesh plus derived topology. Immutable after construction; safe for
// concurrent reads.
struct FeMesh {
  Mesh mesh;

  // Global edges, sorted lexicographically, edge[k][0] < edge[k][1].
  std::vector<std::array<int, 2>> edge;
  // Local side i of a triangle is opposite local vertex i.
  std::vector<std::array<int, 3>> elem2edge;
  // Incident elements per edge; second entry -1 for boundary edges.
  std::vector<std::array<int, 2>> edge2elem;

  // Boundary edges (ascending edge indices) and their partition into
  // parts. Part k < bd_str.size() collects the edges whose midpoint
  // satisfies predicate k (first match wins); the last part collects the
  // rest. With no predicates there is a single part holding everything.
  std::vector<int> bd_edge_idx;
  std::vector<std::vector<int>> bd_edge_idx_type;
  std::vector<std::vector<int>> bd_node_idx_type;

  std::vector<double> he;        // edge lengths
  std::vector<double> diameter;  // element diameters (longest side)

  // Side direction vs. global edge direction: +1 when the local traversal
  // of side i agrees with edge (a,b), a < b; -1 when it opposes it;
  // 0 on boundary sides.
  std::vector<std::array<int, 3>> sgnelem;

  int num_nodes() const { return mesh.num_nodes(); }
  int num_elements() const { return mesh.num_elements(); }
  int num_edges() const { return static_cast<int>(edge.size()); }
  int num_boundary_parts() const {
    return static_cast<int>(bd_edge_idx_type.size());
  }

  bool edge_is_boundary(int e) const { return edge2elem[e][1] < 0; }
  // Vertex pairs of one boundary part.
  std::vector<std::array<int, 2>> edges_of_part(int part) const;
};

// Builds the derived topology. bd_str holds boundary predicates in the
// mini-language over x and y (see predicate.hpp), evaluated at edge
// midpoints. Throws on invalid meshes (an edge shared by more than two
// triangles, degenerate or clockwise elements) and on predicate parse
// errors.
FeMesh build_fe_mesh(Mesh mesh, const std::vector<std::string>& bd_str = {});

}  // namespace afem
