#include "afem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "afem/error.hpp"
#include "afem/predicate.hpp"

namespace afem {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

double element_area(const Mesh& mesh, int t) {
  const auto& e = mesh.elem[t];
  return signed_area(mesh.node[e[0]], mesh.node[e[1]], mesh.node[e[2]]);
}

void validate(const Mesh& mesh) {
  const int n = mesh.num_nodes();
  for (int t = 0; t < mesh.num_elements(); ++t) {
    const auto& e = mesh.elem[t];
    for (int v : e) {
      if (v < 0 || v >= n) {
        throw Error("mesh: element " + std::to_string(t) +
                    " references vertex " + std::to_string(v) +
                    " out of range");
      }
    }
    const double area = element_area(mesh, t);
    if (!(area > 0.0)) {
      throw Error("mesh: element " + std::to_string(t) +
                  " is degenerate or clockwise (signed area " +
                  std::to_string(area) + ")");
    }
  }
}

namespace {

int cell_count(double length, double h, const char* axis) {
  if (!(h > 0.0)) {
    throw Error(std::string("square_mesh: non-positive spacing on ") + axis);
  }
  const int n = static_cast<int>(std::lround(length / h));
  if (n < 1) {
    throw Error(std::string("square_mesh: spacing larger than the ") + axis +
                " side (cell count < 1)");
  }
  return n;
}

}  // namespace

Mesh square_mesh(const Rect& rect, double h1, double h2) {
  if (!(rect.x1 < rect.x2) || !(rect.y1 < rect.y2)) {
    throw Error("square_mesh: empty rectangle");
  }
  const int nx = cell_count(rect.x2 - rect.x1, h1, "x");
  const int ny = cell_count(rect.y2 - rect.y1, h2, "y");
  const double dx = (rect.x2 - rect.x1) / nx;
  const double dy = (rect.y2 - rect.y1) / ny;

  Mesh mesh;
  mesh.node.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      mesh.node.push_back({rect.x1 + i * dx, rect.y1 + j * dy});
    }
  }

  // Cell corners a (lower-left), b, c (upper-right), d; diagonal a-c. The
  // diagonal is each triangle's first side so it is also the refinement
  // edge, shared by the pair.
  mesh.elem.reserve(static_cast<std::size_t>(2) * nx * ny);
  const int stride = nx + 1;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = j * stride + i;
      const int b = a + 1;
      const int c = a + 1 + stride;
      const int d = a + stride;
      mesh.elem.push_back({b, c, a});
      mesh.elem.push_back({d, a, c});
    }
  }
  return mesh;
}

Mesh label_longest_edge(const Mesh& mesh) {
  Mesh out = mesh;
  for (auto& e : out.elem) {
    double len2[3];
    for (int i = 0; i < 3; ++i) {
      const Point& p = mesh.node[e[(i + 1) % 3]];
      const Point& q = mesh.node[e[(i + 2) % 3]];
      len2[i] = (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y);
    }
    int best = 0;
    for (int i = 1; i < 3; ++i) {
      if (len2[i] > len2[best]) best = i;
    }
    // Cyclic rotation keeps the orientation.
    std::array<int, 3> rotated = {e[best], e[(best + 1) % 3],
                                  e[(best + 2) % 3]};
    e = rotated;
  }
  return out;
}

std::vector<std::array<int, 2>> FeMesh::edges_of_part(int part) const {
  std::vector<std::array<int, 2>> out;
  if (part < 0 || part >= num_boundary_parts()) {
    throw Error("edges_of_part: no boundary part " + std::to_string(part));
  }
  out.reserve(bd_edge_idx_type[part].size());
  for (int e : bd_edge_idx_type[part]) out.push_back(edge[e]);
  return out;
}

FeMesh build_fe_mesh(Mesh mesh, const std::vector<std::string>& bd_str) {
  validate(mesh);

  FeMesh fe;
  const int nt = mesh.num_elements();

  // Collect the undirected edge set; local side i is opposite local
  // vertex i.
  std::map<std::pair<int, int>, int> edge_id;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 2>> edge_elems;
  std::vector<std::array<int, 3>> elem2edge(nt);

  for (int t = 0; t < nt; ++t) {
    const auto& e = mesh.elem[t];
    for (int i = 0; i < 3; ++i) {
      int a = e[(i + 1) % 3];
      int b = e[(i + 2) % 3];
      if (a > b) std::swap(a, b);
      auto [it, inserted] = edge_id.try_emplace({a, b},
                                                static_cast<int>(edges.size()));
      if (inserted) {
        edges.push_back({a, b});
        edge_elems.push_back({t, -1});
      } else {
        auto& inc = edge_elems[it->second];
        if (inc[1] >= 0) {
          throw Error("build_fe_mesh: edge (" + std::to_string(a + 1) + "," +
                      std::to_string(b + 1) + ") shared by more than two "
                      "triangles");
        }
        inc[1] = t;
      }
      elem2edge[t][i] = it->second;
    }
  }

  // Re-number edges in lexicographic order (std::map already iterates that
  // way, but edges were appended in discovery order).
  const int ne = static_cast<int>(edges.size());
  std::vector<int> order(ne);
  {
    int k = 0;
    for (const auto& [key, id] : edge_id) {
      order[id] = k++;
      (void)key;
    }
  }
  fe.edge.resize(ne);
  fe.edge2elem.resize(ne);
  for (int old_id = 0; old_id < ne; ++old_id) {
    fe.edge[order[old_id]] = edges[old_id];
    fe.edge2elem[order[old_id]] = edge_elems[old_id];
  }
  fe.elem2edge = std::move(elem2edge);
  for (auto& row : fe.elem2edge) {
    for (int& e : row) e = order[e];
  }

  // Edge lengths and element diameters.
  fe.he.resize(ne);
  for (int e = 0; e < ne; ++e) {
    fe.he[e] = distance(mesh.node[fe.edge[e][0]], mesh.node[fe.edge[e][1]]);
  }
  fe.diameter.resize(nt);
  for (int t = 0; t < nt; ++t) {
    double d = 0.0;
    for (int i = 0; i < 3; ++i) d = std::max(d, fe.he[fe.elem2edge[t][i]]);
    fe.diameter[t] = d;
  }

  // Side signs: +1 when the local traversal of side i (next vertex to
  // next-next vertex) runs with the global edge direction, -1 against it;
  // boundary slots zeroed.
  fe.sgnelem.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& e = mesh.elem[t];
    for (int i = 0; i < 3; ++i) {
      const int from = e[(i + 1) % 3];
      const int to = e[(i + 2) % 3];
      int sgn = (to > from) ? 1 : -1;
      if (fe.edge2elem[fe.elem2edge[t][i]][1] < 0) sgn = 0;
      fe.sgnelem[t][i] = sgn;
    }
  }

  // Boundary edges and their partition by the predicates, evaluated at the
  // edge midpoint; first match wins, the rest land in the final part.
  for (int e = 0; e < ne; ++e) {
    if (fe.edge2elem[e][1] < 0) fe.bd_edge_idx.push_back(e);
  }

  std::vector<BoundaryPredicate> predicates;
  predicates.reserve(bd_str.size());
  for (const auto& text : bd_str) {
    predicates.push_back(BoundaryPredicate::parse(text));
  }

  const int parts = bd_str.empty() ? 1 : static_cast<int>(bd_str.size()) + 1;
  fe.bd_edge_idx_type.assign(parts, {});
  for (int e : fe.bd_edge_idx) {
    const Point mid =
        midpoint(mesh.node[fe.edge[e][0]], mesh.node[fe.edge[e][1]]);
    int part = parts - 1;
    for (std::size_t k = 0; k < predicates.size(); ++k) {
      if (predicates[k](mid.x, mid.y)) {
        part = static_cast<int>(k);
        break;
      }
    }
    fe.bd_edge_idx_type[part].push_back(e);
  }

  fe.bd_node_idx_type.assign(parts, {});
  for (int p = 0; p < parts; ++p) {
    auto& nodes = fe.bd_node_idx_type[p];
    for (int e : fe.bd_edge_idx_type[p]) {
      nodes.push_back(fe.edge[e][0]);
      nodes.push_back(fe.edge[e][1]);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  }

  fe.mesh = std::move(mesh);
  return fe;
}

}  // namespace afem
