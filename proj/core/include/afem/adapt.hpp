#pragma once

#include <vector>

#include "afem/mesh.hpp"

namespace afem {

// Dörfler bulk marking: the shortest prefix of elements, sorted by
// decreasing eta_K^2 (ties by lower index), whose squared indicators reach
// theta times the total.
struct MarkedSet {
  std::vector<int> elements;  // ascending element indices
  double theta = 0.0;
};
MarkedSet mark(const std::vector<double>& eta, double theta);

// Bisection output with provenance.
struct RefinedMesh {
  Mesh mesh;
  std::vector<int> parent;      // new element -> element of the input mesh
  std::vector<int> generation;  // carried-in level plus bisections applied
};

// Newest-vertex bisection with conformity completion. The refinement edge
// of every element is its first side (opposite local vertex 1); bisection
// inserts its midpoint m and produces children (m, v1, v2) and (m, v3, v1),
// so m leads each child and the children's refinement edges are the other
// two original sides. Completion slates the refinement edge of any element
// with a slated side until nothing changes, which leaves no hanging nodes.
// square_mesh and bisect emit meshes in this convention already;
// label_longest_edge prepares arbitrary ones.
RefinedMesh bisect(const Mesh& mesh, const MarkedSet& marked,
                   const std::vector<int>& generation = {});

}  // namespace afem
