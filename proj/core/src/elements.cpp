#include "afem/elements.hpp"

#include <cmath>
#include <string>

#include "afem/error.hpp"

namespace afem {

Deriv deriv_from_string(std::string_view w) {
  if (w == ".val") return Deriv::val;
  if (w == ".dx") return Deriv::dx;
  if (w == ".dy") return Deriv::dy;
  if (w == ".dxx") return Deriv::dxx;
  if (w == ".dyy") return Deriv::dyy;
  throw Error("invalid derivative selector '" + std::string(w) + "'");
}

int local_dof_count(int degree) {
  switch (degree) {
    case 1:
      return 3;
    case 2:
      return 6;
    case 3:
      return 10;
    default:
      throw Error("unsupported element degree " + std::to_string(degree));
  }
}

ElemGeometry barycentric_gradients(const Mesh& mesh) {
  const int nt = mesh.num_elements();
  ElemGeometry geom;
  geom.grad_lambda.resize(nt);
  geom.area.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const Point& v1 = mesh.node[mesh.elem[t][0]];
    const Point& v2 = mesh.node[mesh.elem[t][1]];
    const Point& v3 = mesh.node[mesh.elem[t][2]];
    const double area = signed_area(v1, v2, v3);
    if (!(area > 0.0)) {
      throw Error("barycentric_gradients: degenerate element " +
                  std::to_string(t));
    }
    geom.area[t] = area;
    // grad lambda_i is the inward-scaled normal of the opposite side:
    // lambda_1 = ((v2-p) x (v3-p)) / (2|K|) etc.
    const double s = 1.0 / (2.0 * area);
    geom.grad_lambda[t][0] = {s * (v2.y - v3.y), s * (v3.x - v2.x)};
    geom.grad_lambda[t][1] = {s * (v3.y - v1.y), s * (v1.x - v3.x)};
    geom.grad_lambda[t][2] = {s * (v1.y - v2.y), s * (v2.x - v1.x)};
  }
  return geom;
}

namespace {

// Local side i runs from vertex (i+1)%3 to vertex (i+2)%3.
constexpr int kSideFrom[3] = {1, 2, 0};
constexpr int kSideTo[3] = {2, 0, 1};

}  // namespace

FeSpace build_dof_map(const FeMesh& fe_mesh, int degree) {
  const int n = fe_mesh.num_nodes();
  const int nt = fe_mesh.num_elements();
  const int ne = fe_mesh.num_edges();
  const int nloc = local_dof_count(degree);

  FeSpace space;
  space.degree = degree;
  space.nloc = nloc;
  space.elem2dof.resize(static_cast<std::size_t>(nt) * nloc);

  switch (degree) {
    case 1:
      space.ndof = n;
      break;
    case 2:
      space.ndof = n + ne;
      break;
    case 3:
      space.ndof = n + 2 * ne + nt;
      break;
    default:
      throw Error("unsupported element degree");
  }

  for (int t = 0; t < nt; ++t) {
    int* row = space.elem2dof.data() + static_cast<std::size_t>(t) * nloc;
    for (int i = 0; i < 3; ++i) row[i] = fe_mesh.mesh.elem[t][i];
    if (degree == 2) {
      for (int i = 0; i < 3; ++i) row[3 + i] = n + fe_mesh.elem2edge[t][i];
    } else if (degree == 3) {
      // Two dofs per side; the global pair (N+2e, N+2e+1) is ordered along
      // the edge (a,b) with a < b, the local pair along the side traversal.
      for (int i = 0; i < 3; ++i) {
        const int e = fe_mesh.elem2edge[t][i];
        const int from = fe_mesh.mesh.elem[t][kSideFrom[i]];
        const int first = n + 2 * e;
        if (from == fe_mesh.edge[e][0]) {
          row[3 + 2 * i] = first;
          row[3 + 2 * i + 1] = first + 1;
        } else {
          row[3 + 2 * i] = first + 1;
          row[3 + 2 * i + 1] = first;
        }
      }
      row[9] = n + 2 * ne + t;
    }
  }
  return space;
}

std::vector<Point> dof_points(const FeMesh& fe_mesh, const FeSpace& space) {
  const Mesh& mesh = fe_mesh.mesh;
  std::vector<Point> pts(space.ndof);
  const int n = mesh.num_nodes();
  for (int i = 0; i < n; ++i) pts[i] = mesh.node[i];

  if (space.degree == 2) {
    for (int e = 0; e < fe_mesh.num_edges(); ++e) {
      pts[n + e] =
          midpoint(mesh.node[fe_mesh.edge[e][0]], mesh.node[fe_mesh.edge[e][1]]);
    }
  } else if (space.degree == 3) {
    for (int e = 0; e < fe_mesh.num_edges(); ++e) {
      const Point& a = mesh.node[fe_mesh.edge[e][0]];
      const Point& b = mesh.node[fe_mesh.edge[e][1]];
      pts[n + 2 * e] = {(2.0 * a.x + b.x) / 3.0, (2.0 * a.y + b.y) / 3.0};
      pts[n + 2 * e + 1] = {(a.x + 2.0 * b.x) / 3.0, (a.y + 2.0 * b.y) / 3.0};
    }
    const int off = n + 2 * fe_mesh.num_edges();
    for (int t = 0; t < mesh.num_elements(); ++t) {
      const Point& v1 = mesh.node[mesh.elem[t][0]];
      const Point& v2 = mesh.node[mesh.elem[t][1]];
      const Point& v3 = mesh.node[mesh.elem[t][2]];
      pts[off + t] = {(v1.x + v2.x + v3.x) / 3.0, (v1.y + v2.y + v3.y) / 3.0};
    }
  }
  return pts;
}

namespace {

// Barycentric polynomials of the nodal bases. For every local function we
// evaluate the value and the first/second derivatives with respect to
// (l1, l2, l3) treated as independent variables; the chain rule through the
// element's grad(lambda) turns those into physical derivatives.
struct BasisPoly {
  double v = 0.0;
  double d[3] = {0.0, 0.0, 0.0};
  double d2[3][3] = {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
};

void eval_p1(const double l[3], int i, BasisPoly& out) {
  out = BasisPoly{};
  out.v = l[i];
  out.d[i] = 1.0;
}

void eval_p2(const double l[3], int i, BasisPoly& out) {
  out = BasisPoly{};
  if (i < 3) {
    out.v = l[i] * (2.0 * l[i] - 1.0);
    out.d[i] = 4.0 * l[i] - 1.0;
    out.d2[i][i] = 4.0;
  } else {
    const int side = i - 3;
    const int a = kSideFrom[side], b = kSideTo[side];
    out.v = 4.0 * l[a] * l[b];
    out.d[a] = 4.0 * l[b];
    out.d[b] = 4.0 * l[a];
    out.d2[a][b] = out.d2[b][a] = 4.0;
  }
}

void eval_p3(const double l[3], int i, BasisPoly& out) {
  out = BasisPoly{};
  if (i < 3) {
    const double li = l[i];
    out.v = 0.5 * li * (3.0 * li - 1.0) * (3.0 * li - 2.0);
    out.d[i] = 0.5 * (27.0 * li * li - 18.0 * li + 2.0);
    out.d2[i][i] = 27.0 * li - 9.0;
  } else if (i < 9) {
    // Side dofs: 2 per side, the first belongs to the node at 2/3 toward
    // the side's starting vertex.
    const int side = (i - 3) / 2;
    const int which = (i - 3) % 2;
    int a = kSideFrom[side], b = kSideTo[side];
    if (which == 1) std::swap(a, b);
    const double la = l[a], lb = l[b];
    out.v = 4.5 * la * lb * (3.0 * la - 1.0);
    out.d[a] = 4.5 * lb * (6.0 * la - 1.0);
    out.d[b] = 4.5 * la * (3.0 * la - 1.0);
    out.d2[a][a] = 27.0 * lb;
    out.d2[a][b] = out.d2[b][a] = 4.5 * (6.0 * la - 1.0);
  } else {
    out.v = 27.0 * l[0] * l[1] * l[2];
    out.d[0] = 27.0 * l[1] * l[2];
    out.d[1] = 27.0 * l[0] * l[2];
    out.d[2] = 27.0 * l[0] * l[1];
    out.d2[0][1] = out.d2[1][0] = 27.0 * l[2];
    out.d2[0][2] = out.d2[2][0] = 27.0 * l[1];
    out.d2[1][2] = out.d2[2][1] = 27.0 * l[0];
  }
}

void eval_basis(int degree, const double l[3], int i, BasisPoly& out) {
  switch (degree) {
    case 1:
      eval_p1(l, i, out);
      break;
    case 2:
      eval_p2(l, i, out);
      break;
    case 3:
      eval_p3(l, i, out);
      break;
    default:
      throw Error("unsupported element degree");
  }
}

}  // namespace

RefBasis::RefBasis(int degree, const Table& bary_pts)
    : degree_(degree), nloc_(local_dof_count(degree)), npts_(bary_pts.rows()) {
  if (bary_pts.cols() != 3) {
    throw Error("RefBasis: point table must have 3 barycentric columns");
  }
  val_ = Table(nloc_, npts_);
  for (auto& t : dlam_) t = Table(nloc_, npts_);
  for (auto& row : d2lam_) {
    for (auto& t : row) t = Table(nloc_, npts_);
  }
  BasisPoly poly;
  for (int p = 0; p < npts_; ++p) {
    const double l[3] = {bary_pts(p, 0), bary_pts(p, 1), bary_pts(p, 2)};
    for (int i = 0; i < nloc_; ++i) {
      eval_basis(degree_, l, i, poly);
      val_(i, p) = poly.v;
      for (int m = 0; m < 3; ++m) {
        dlam_[m](i, p) = poly.d[m];
        for (int n = 0; n < 3; ++n) d2lam_[m][n](i, p) = poly.d2[m][n];
      }
    }
  }
}

void RefBasis::eval(const ElemGeometry& geom, int t, Deriv w,
                    Table& out) const {
  if (out.rows() != nloc_ || out.cols() != npts_) {
    out = Table(nloc_, npts_);
  }
  const auto& g = geom.grad_lambda[t];
  switch (w) {
    case Deriv::val:
      for (int i = 0; i < nloc_; ++i) {
        for (int p = 0; p < npts_; ++p) out(i, p) = val_(i, p);
      }
      return;
    case Deriv::dx:
    case Deriv::dy: {
      const double c[3] = {w == Deriv::dx ? g[0].x : g[0].y,
                           w == Deriv::dx ? g[1].x : g[1].y,
                           w == Deriv::dx ? g[2].x : g[2].y};
      for (int i = 0; i < nloc_; ++i) {
        for (int p = 0; p < npts_; ++p) {
          out(i, p) = c[0] * dlam_[0](i, p) + c[1] * dlam_[1](i, p) +
                      c[2] * dlam_[2](i, p);
        }
      }
      return;
    }
    case Deriv::dxx:
    case Deriv::dyy: {
      const double c[3] = {w == Deriv::dxx ? g[0].x : g[0].y,
                           w == Deriv::dxx ? g[1].x : g[1].y,
                           w == Deriv::dxx ? g[2].x : g[2].y};
      for (int i = 0; i < nloc_; ++i) {
        for (int p = 0; p < npts_; ++p) {
          double acc = 0.0;
          for (int m = 0; m < 3; ++m) {
            for (int n = 0; n < 3; ++n) {
              acc += c[m] * c[n] * d2lam_[m][n](i, p);
            }
          }
          out(i, p) = acc;
        }
      }
      return;
    }
  }
  throw Error("RefBasis::eval: invalid selector");
}

BasisTable basis_eval(int degree, const Table& bary_pts, Deriv w,
                      const Mesh& mesh) {
  const RefBasis ref(degree, bary_pts);
  const ElemGeometry geom = barycentric_gradients(mesh);
  const int nt = mesh.num_elements();
  const int nloc = ref.nloc();
  const int npts = ref.npts();

  BasisTable table;
  table.base.assign(nloc, Table(nt, npts));
  Table scratch(nloc, npts);
  for (int t = 0; t < nt; ++t) {
    ref.eval(geom, t, w, scratch);
    for (int i = 0; i < nloc; ++i) {
      for (int p = 0; p < npts; ++p) table.base[i](t, p) = scratch(i, p);
    }
  }
  return table;
}

}  // namespace afem
