#include "afem/adapt.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>

#include "afem/error.hpp"

namespace afem {

MarkedSet mark(const std::vector<double>& eta, double theta) {
  if (theta < 0.0 || theta > 1.0) {
    throw Error("mark: theta must lie in [0,1]");
  }
  for (double e : eta) {
    if (e < 0.0) throw Error("mark: negative indicator entry");
  }

  const int nt = static_cast<int>(eta.size());
  std::vector<int> order(nt);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&eta](int a, int b) {
    const double ea = eta[a] * eta[a];
    const double eb = eta[b] * eta[b];
    return ea != eb ? ea > eb : a < b;
  });

  // Total accumulated in the sorted order, so the full prefix of positive
  // entries reaches it exactly and theta = 1 behaves.
  double total = 0.0;
  for (int t : order) total += eta[t] * eta[t];
  const double target = theta * total;

  MarkedSet marked;
  marked.theta = theta;
  double sum = 0.0;
  for (int t : order) {
    if (sum >= target) break;
    if (eta[t] == 0.0) break;  // only zeros remain; they cannot help
    marked.elements.push_back(t);
    sum += eta[t] * eta[t];
  }
  std::sort(marked.elements.begin(), marked.elements.end());
  return marked;
}

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

struct Bisector {
  const Mesh& in;
  Mesh out;
  std::vector<int> parent;
  std::vector<int> generation;
  std::map<EdgeKey, char> slated;
  std::map<EdgeKey, int> midpoints;

  int midpoint_node(int a, int b) {
    const EdgeKey key = edge_key(a, b);
    auto it = midpoints.find(key);
    if (it != midpoints.end()) return it->second;
    const int id = static_cast<int>(out.node.size());
    out.node.push_back(midpoint(in.node[a], in.node[b]));
    midpoints.emplace(key, id);
    return id;
  }

  bool is_slated(int a, int b) const {
    return slated.count(edge_key(a, b)) != 0;
  }

  void emit(int v1, int v2, int v3, int from, int gen) {
    out.elem.push_back({v1, v2, v3});
    parent.push_back(from);
    generation.push_back(gen);
  }

  // Splits (v1,v2,v3) at the midpoint of its refinement edge (v2,v3) and
  // recurses into the children whose refinement edges — the other two
  // original sides — are slated. New interior edges are never slated, so
  // the recursion stops after the original sides.
  void split(int v1, int v2, int v3, int from, int gen) {
    if (!is_slated(v2, v3)) {
      emit(v1, v2, v3, from, gen);
      return;
    }
    const int m = midpoint_node(v2, v3);
    split(m, v1, v2, from, gen + 1);
    split(m, v3, v1, from, gen + 1);
  }
};

}  // namespace

RefinedMesh bisect(const Mesh& mesh, const MarkedSet& marked,
                   const std::vector<int>& generation) {
  validate(mesh);
  const int nt = mesh.num_elements();
  if (!generation.empty() && static_cast<int>(generation.size()) != nt) {
    throw Error("bisect: generation vector does not match the mesh");
  }
  for (int t : marked.elements) {
    if (t < 0 || t >= nt) {
      throw Error("bisect: marked element " + std::to_string(t) +
                  " out of range");
    }
  }

  {
    std::map<EdgeKey, int> incidence;
    for (const auto& e : mesh.elem) {
      for (int i = 0; i < 3; ++i) {
        if (++incidence[edge_key(e[(i + 1) % 3], e[(i + 2) % 3])] > 2) {
          throw Error("bisect: non-conforming input mesh (an edge is shared "
                      "by more than two triangles)");
        }
      }
    }
  }

  Bisector b{mesh, {}, {}, {}, {}, {}};
  b.out.node = mesh.node;

  for (int t : marked.elements) {
    b.slated[edge_key(mesh.elem[t][1], mesh.elem[t][2])] = 1;
  }
  // Completion: an element with any slated side slates its refinement edge
  // too. Slating only grows, so this reaches a fixed point.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int t = 0; t < nt; ++t) {
      const auto& e = mesh.elem[t];
      const EdgeKey ref = edge_key(e[1], e[2]);
      if (b.slated.count(ref)) continue;
      if (b.is_slated(e[0], e[1]) || b.is_slated(e[2], e[0])) {
        b.slated[ref] = 1;
        changed = true;
      }
    }
  }

  for (int t = 0; t < nt; ++t) {
    const int gen = generation.empty() ? 0 : generation[t];
    b.split(mesh.elem[t][0], mesh.elem[t][1], mesh.elem[t][2], t, gen);
  }

  RefinedMesh refined;
  refined.mesh = std::move(b.out);
  refined.parent = std::move(b.parent);
  refined.generation = std::move(b.generation);
  return refined;
}

}  // namespace afem
