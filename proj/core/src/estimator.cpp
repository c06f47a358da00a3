#include "afem/estimator.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "afem/error.hpp"
#include "afem/quadrature.hpp"

namespace afem {

namespace {
constexpr int kSideFrom[3] = {1, 2, 0};
constexpr int kSideTo[3] = {2, 0, 1};
}  // namespace

EdgeQuadIndex edge_quad_index(const FeMesh& fe_mesh, int ng) {
  const int nt = fe_mesh.num_elements();
  const int ne = fe_mesh.num_edges();
  const int shift = ng * ne;

  EdgeQuadIndex index;
  index.ng = ng;
  index.m = IndexTable(nt, 3 * ng);
  index.p = IndexTable(nt, 3 * ng);
  for (int t = 0; t < nt; ++t) {
    for (int i = 0; i < 3; ++i) {
      const int e = fe_mesh.elem2edge[t][i];
      const int sgn = fe_mesh.sgnelem[t][i];
      for (int j = 0; j < ng; ++j) {
        // Sides running with the global edge direction (and boundary
        // sides, sign zero) take the left block in natural order; sides
        // running against it take the right block reversed, so a slot
        // always names the same physical point of the edge.
        const int m = sgn >= 0 ? e * ng + j : shift + e * ng + (ng - 1 - j);
        index.m(t, i * ng + j) = m;
        index.p(t, i * ng + j) = m >= shift ? m - shift : m + shift;
      }
    }
  }
  return index;
}

EdgeNormals edge_normals(const FeMesh& fe_mesh, int ng) {
  const int nt = fe_mesh.num_elements();
  EdgeNormals normals;
  normals.nx = Table(nt, 3 * ng);
  normals.ny = Table(nt, 3 * ng);
  for (int t = 0; t < nt; ++t) {
    for (int i = 0; i < 3; ++i) {
      const Point& from = fe_mesh.mesh.node[fe_mesh.mesh.elem[t][kSideFrom[i]]];
      const Point& to = fe_mesh.mesh.node[fe_mesh.mesh.elem[t][kSideTo[i]]];
      const double ex = from.x - to.x;
      const double ey = from.y - to.y;
      const double len = std::hypot(ex, ey);
      // Outward unit normal of side i: rotate the normalized chord.
      const double nx = -ey / len;
      const double nyv = ex / len;
      for (int j = 0; j < ng; ++j) {
        normals.nx(t, i * ng + j) = nx;
        normals.ny(t, i * ng + j) = nyv;
      }
    }
  }
  return normals;
}

Table scatter_exterior(const FeMesh& fe_mesh, const EdgeQuadIndex& index,
                       const Table& m) {
  const int nt = fe_mesh.num_elements();
  const int cols = 3 * index.ng;
  if (m.rows() != nt || m.cols() != cols) {
    throw Error("scatter_exterior: table shape mismatch");
  }
  // Every slot has at most one writer: the with-direction element fills the
  // left block of its edge, the against-direction one the right block, and
  // right-block slots of boundary edges stay zero.
  std::vector<double> slots(
      static_cast<std::size_t>(2) * fe_mesh.num_edges() * index.ng, 0.0);
  for (int t = 0; t < nt; ++t) {
    for (int c = 0; c < cols; ++c) slots[index.m(t, c)] = m(t, c);
  }
  Table p(nt, cols);
  for (int t = 0; t < nt; ++t) {
    for (int c = 0; c < cols; ++c) p(t, c) = slots[index.p(t, c)];
  }
  return p;
}

EdgeEvaluations elem2edgeInterp(Deriv w, const FeMesh& fe_mesh,
                                const std::vector<double>& uh,
                                const FeSpace& space, int quad_order) {
  if (w != Deriv::val && w != Deriv::dx && w != Deriv::dy) {
    throw Error("elem2edgeInterp: selector must be .val, .dx or .dy");
  }
  if (static_cast<int>(uh.size()) != space.ndof) {
    throw Error("elem2edgeInterp: dof vector does not match the space");
  }
  const QuadRuleBd rule = quadptsBd(quad_order);
  const int ng = rule.ng();
  const RefBasis ref(space.degree, rule.lambda);
  const ElemGeometry geom = barycentric_gradients(fe_mesh.mesh);
  const int nt = fe_mesh.num_elements();

  EdgeEvaluations eval;
  eval.m = Table(nt, 3 * ng);
  Table basis(ref.nloc(), 3 * ng);
  for (int t = 0; t < nt; ++t) {
    ref.eval(geom, t, w, basis);
    for (int c = 0; c < 3 * ng; ++c) {
      double acc = 0.0;
      for (int i = 0; i < ref.nloc(); ++i) {
        acc += uh[space.dof(t, i)] * basis(i, c);
      }
      eval.m(t, c) = acc;
    }
  }
  eval.p = scatter_exterior(fe_mesh, edge_quad_index(fe_mesh, ng), eval.m);
  return eval;
}

std::vector<double> residual_term(const FeMesh& fe_mesh, const FeSpace& space,
                                  const std::vector<double>& uh,
                                  const CoefSource& f, int quad_order) {
  const Table fc = interp2dMat(f, Deriv::val, fe_mesh, space, quad_order);
  const Table uxx = interp2dMat(uh, Deriv::dxx, fe_mesh, space, quad_order);
  const Table uyy = interp2dMat(uh, Deriv::dyy, fe_mesh, space, quad_order);

  Table strong_residual_sq(fc.rows(), fc.cols());
  for (int t = 0; t < fc.rows(); ++t) {
    for (int g = 0; g < fc.cols(); ++g) {
      const double r = fc(t, g) + uxx(t, g) + uyy(t, g);
      strong_residual_sq(t, g) = r * r;
    }
  }
  Integral2d integral =
      integral2d(fe_mesh, Coef(std::move(strong_residual_sq)), space,
                 quad_order);
  std::vector<double> res = std::move(integral.per_element);
  for (int t = 0; t < fe_mesh.num_elements(); ++t) {
    res[t] *= fe_mesh.diameter[t] * fe_mesh.diameter[t];
  }
  return res;
}

std::vector<double> jump_term_from(const FeMesh& fe_mesh,
                                   const EdgeEvaluations& ddx,
                                   const EdgeEvaluations& ddy,
                                   const EdgeNormals& normals, int quad_order,
                                   bool include_boundary) {
  const QuadRule1D rule = quadpts1(quad_order);
  const int ng = rule.ng();
  const int nt = fe_mesh.num_elements();
  if (ddx.m.cols() != 3 * ng) {
    throw Error("jump_term_from: evaluation tables do not match quad_order");
  }

  std::vector<double> jump(nt, 0.0);
  for (int t = 0; t < nt; ++t) {
    for (int i = 0; i < 3; ++i) {
      const int e = fe_mesh.elem2edge[t][i];
      if (!include_boundary && fe_mesh.edge_is_boundary(e)) continue;
      const double he2 = fe_mesh.he[e] * fe_mesh.he[e];
      double acc = 0.0;
      for (int g = 0; g < ng; ++g) {
        const int c = i * ng + g;
        const double jx = ddx.m(t, c) - ddx.p(t, c);
        const double jy = ddy.m(t, c) - ddy.p(t, c);
        const double jn = jx * normals.nx(t, c) + jy * normals.ny(t, c);
        acc += rule.weight[g] * jn * jn;
      }
      jump[t] += he2 * acc;
    }
  }
  return jump;
}

std::vector<double> jump_term(const FeMesh& fe_mesh, const FeSpace& space,
                              const std::vector<double>& uh, int quad_order,
                              bool include_boundary) {
  const EdgeEvaluations ddx =
      elem2edgeInterp(Deriv::dx, fe_mesh, uh, space, quad_order);
  const EdgeEvaluations ddy =
      elem2edgeInterp(Deriv::dy, fe_mesh, uh, space, quad_order);
  const EdgeNormals normals =
      edge_normals(fe_mesh, quadpts1(quad_order).ng());
  return jump_term_from(fe_mesh, ddx, ddy, normals, quad_order,
                        include_boundary);
}

double Indicator::total() const {
  double acc = 0.0;
  for (double e : eta) acc += e * e;
  return std::sqrt(acc);
}

Indicator indicator(const FeMesh& fe_mesh, const FeSpace& space,
                    const std::vector<double>& uh, const CoefSource& f,
                    int quad_order, bool include_boundary_jumps) {
  Indicator ind;
  ind.elem_res = residual_term(fe_mesh, space, uh, f, quad_order);
  ind.elem_jump =
      jump_term(fe_mesh, space, uh, quad_order, include_boundary_jumps);
  ind.eta.resize(ind.elem_res.size());
  for (std::size_t t = 0; t < ind.eta.size(); ++t) {
    ind.eta[t] = std::sqrt(std::abs(ind.elem_res[t]) + ind.elem_jump[t]);
  }
  return ind;
}

}  // namespace afem
