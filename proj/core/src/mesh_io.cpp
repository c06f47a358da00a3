#include "afem/mesh_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include "afem/error.hpp"

namespace afem {

Mesh read_mesh_text(std::istream& in) {
  int n = 0, nt = 0;
  if (!(in >> n >> nt) || n < 3 || nt < 1) {
    throw Error("mesh file: bad header (expected 'N NT')");
  }
  Mesh mesh;
  mesh.node.resize(n);
  for (int i = 0; i < n; ++i) {
    if (!(in >> mesh.node[i].x >> mesh.node[i].y)) {
      throw Error("mesh file: bad coordinate line " + std::to_string(i + 1));
    }
  }
  mesh.elem.resize(nt);
  for (int t = 0; t < nt; ++t) {
    int v1 = 0, v2 = 0, v3 = 0;
    if (!(in >> v1 >> v2 >> v3)) {
      throw Error("mesh file: bad connectivity line " + std::to_string(t + 1));
    }
    if (v1 < 1 || v1 > n || v2 < 1 || v2 > n || v3 < 1 || v3 > n) {
      throw Error("mesh file: vertex index out of range on connectivity line " +
                  std::to_string(t + 1));
    }
    mesh.elem[t] = {v1 - 1, v2 - 1, v3 - 1};
  }
  validate(mesh);
  return mesh;
}

Mesh read_mesh_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh file '" + path + "'");
  return read_mesh_text(in);
}

void write_mesh_text(const Mesh& mesh, std::ostream& out) {
  out << mesh.num_nodes() << ' ' << mesh.num_elements() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& p : mesh.node) out << p.x << ' ' << p.y << '\n';
  for (const auto& e : mesh.elem) {
    out << e[0] + 1 << ' ' << e[1] + 1 << ' ' << e[2] + 1 << '\n';
  }
}

void write_mesh_text_file(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_mesh_text(mesh, out);
  if (!out) throw Error("write failed for '" + path + "'");
}

void export_mesh_svg(const Mesh& mesh, std::ostream& out) {
  double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& p : mesh.node) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double w = std::max(xmax - xmin, 1e-12);
  const double h = std::max(ymax - ymin, 1e-12);

  // Unique undirected edges.
  std::vector<std::array<int, 2>> edges;
  {
    std::vector<std::array<int, 2>> all;
    all.reserve(mesh.elem.size() * 3);
    for (const auto& e : mesh.elem) {
      for (int i = 0; i < 3; ++i) {
        int a = e[(i + 1) % 3], b = e[(i + 2) % 3];
        if (a > b) std::swap(a, b);
        all.push_back({a, b});
      }
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    edges = std::move(all);
  }

  out << std::setprecision(10);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << xmin << ' '
      << ymin << ' ' << w << ' ' << h << "\">\n";
  // Flip y so the picture has the usual mathematical orientation.
  out << "<g transform=\"translate(0," << (ymin + ymax)
      << ") scale(1,-1)\" stroke=\"black\" stroke-width=\""
      << 0.0025 * std::max(w, h) << "\" fill=\"none\">\n";
  for (const auto& e : edges) {
    const Point& a = mesh.node[e[0]];
    const Point& b = mesh.node[e[1]];
    out << "<polyline points=\"" << a.x << ',' << a.y << ' ' << b.x << ','
        << b.y << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

void export_mesh_svg(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  export_mesh_svg(mesh, out);
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace afem
