#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "afem/mesh.hpp"
#include "afem/table.hpp"

namespace afem {

inline constexpr int kMaxDegree = 3;

// Derivative selector (the wStr argument of the evaluation routines).
enum class Deriv { val, dx, dy, dxx, dyy };

// Parses ".val", ".dx", ".dy", ".dxx", ".dyy"; throws on anything else.
Deriv deriv_from_string(std::string_view w);

// 3, 6, 10 for k = 1, 2, 3.
int local_dof_count(int degree);

// Barycentric gradients (constant per triangle) and element areas.
struct ElemGeometry {
  std::vector<std::array<Vec2, 3>> grad_lambda;  // NT x 3
  std::vector<double> area;                      // NT
};
ElemGeometry barycentric_gradients(const Mesh& mesh);

// P_k Lagrange space: global dof count and the element-to-dof map.
// Dof layout: vertices first; for k=2 one dof per edge (edge j -> N + j);
// for k=3 two dofs per edge ordered along the global edge direction
// (edge (a,b), a < b: first the node nearer a, then the node nearer b),
// then one interior dof per element.
struct FeSpace {
  int degree = 1;
  int ndof = 0;
  int nloc = 3;
  std::vector<int> elem2dof;  // NT x nloc, row-major

  int dof(int t, int i) const {
    return elem2dof[static_cast<std::size_t>(t) * nloc + i];
  }
};
FeSpace build_dof_map(const FeMesh& fe_mesh, int degree);

// Physical coordinates of the nodal point carrying each global dof.
std::vector<Point> dof_points(const FeMesh& fe_mesh, const FeSpace& space);

// Reference-element basis data at a fixed barycentric point set: values and
// derivatives with respect to the barycentric coordinates. Physical
// derivatives follow by the chain rule through the per-element barycentric
// gradients; since those are constant, second physical derivatives need no
// curvature term.
class RefBasis {
 public:
  RefBasis(int degree, const Table& bary_pts);  // bary_pts: npts x 3

  int degree() const { return degree_; }
  int nloc() const { return nloc_; }
  int npts() const { return npts_; }

  double val(int i, int p) const { return val_(i, p); }
  double dlam(int i, int m, int p) const { return dlam_[m](i, p); }
  double d2lam(int i, int m, int n, int p) const { return d2lam_[m][n](i, p); }

  // Writes the selected evaluation of every local basis function on element
  // t into out (nloc x npts).
  void eval(const ElemGeometry& geom, int t, Deriv w, Table& out) const;

 private:
  int degree_ = 1, nloc_ = 3, npts_ = 0;
  Table val_;
  std::array<Table, 3> dlam_;
  std::array<std::array<Table, 3>, 3> d2lam_;
};

// Fully materialized evaluation tables: base[i] has one row per element and
// one column per point. Convenient for small point sets and for tests;
// the assembly routines stream element by element instead.
struct BasisTable {
  std::vector<Table> base;
};
BasisTable basis_eval(int degree, const Table& bary_pts, Deriv w,
                      const Mesh& mesh);

}  // namespace afem
