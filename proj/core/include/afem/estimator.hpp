#pragma once

#include <vector>

#include "afem/assembly.hpp"
#include "afem/elements.hpp"
#include "afem/mesh.hpp"
#include "afem/table.hpp"

namespace afem {

// Global numbering of the edge quadrature points. Edge k owns the slots
// [k*ng, (k+1)*ng) for its "left" restriction, traversed in the direction
// of the global edge (a,b), a < b; the "right" restriction lives ng*NE
// slots higher. Side (t,i) stores its point indices so that a slot always
// names one physical point of the edge no matter which element looks:
// sides running with the edge take the left block in natural order, sides
// running against it take the right block reversed. Boundary sides (sign 0)
// take the left block, so their exterior indices land in right-block slots
// that nothing ever writes.
struct EdgeQuadIndex {
  IndexTable m;  // NT x 3ng, interior ("minus") slots
  IndexTable p;  // NT x 3ng, exterior ("plus") slots
  int ng = 0;
};
EdgeQuadIndex edge_quad_index(const FeMesh& fe_mesh, int ng);

// Interior/exterior values of some quantity at the side quadrature points.
struct EdgeEvaluations {
  Table m;  // NT x 3ng
  Table p;  // NT x 3ng, zero on boundary sides
};

// Outward unit normals per side, replicated across the side's points.
struct EdgeNormals {
  Table nx;  // NT x 3ng
  Table ny;  // NT x 3ng
};
EdgeNormals edge_normals(const FeMesh& fe_mesh, int ng);

// Scatters interior values into the global slot array and gathers the
// exterior ones back; slots never written (domain boundary) read as zero.
Table scatter_exterior(const FeMesh& fe_mesh, const EdgeQuadIndex& index,
                       const Table& m);

// Evaluations of u_h (w = val) or a first derivative (dx, dy) at the side
// quadrature points of every element.
EdgeEvaluations elem2edgeInterp(Deriv w, const FeMesh& fe_mesh,
                                const std::vector<double>& uh,
                                const FeSpace& space, int quad_order);

// h_K^2 ||f + Laplace(u_h)||_{0,K}^2 per element.
std::vector<double> residual_term(const FeMesh& fe_mesh, const FeSpace& space,
                                  const std::vector<double>& uh,
                                  const CoefSource& f, int quad_order);

// Per element, sum over its sides of h_e^2 sum_g w_g (jump of the normal
// derivative)^2. Boundary sides use exterior value zero and participate
// only when include_boundary is set.
std::vector<double> jump_term(const FeMesh& fe_mesh, const FeSpace& space,
                              const std::vector<double>& uh, int quad_order,
                              bool include_boundary = true);

// Same, but from precomputed edge evaluations of (du/dx, du/dy).
std::vector<double> jump_term_from(const FeMesh& fe_mesh,
                                   const EdgeEvaluations& ddx,
                                   const EdgeEvaluations& ddy,
                                   const EdgeNormals& normals, int quad_order,
                                   bool include_boundary = true);

struct Indicator {
  std::vector<double> elem_res;   // interior residual terms
  std::vector<double> elem_jump;  // edge jump terms
  std::vector<double> eta;        // sqrt(|elem_res| + elem_jump)
  double total() const;           // sqrt(sum eta_K^2)
};

Indicator indicator(const FeMesh& fe_mesh, const FeSpace& space,
                    const std::vector<double>& uh, const CoefSource& f,
                    int quad_order, bool include_boundary_jumps = true);

}  // namespace afem
