#include "afem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "afem/error.hpp"

namespace afem {

FormToken FormToken::parse(std::string_view text) {
  FormToken token;
  if (text.size() < 3 || (text[0] != 'v' && text[0] != 'u') || text[1] != '.') {
    throw Error("invalid form token '" + std::string(text) + "'");
  }
  token.side = text[0] == 'v' ? Side::test : Side::trial;
  const std::string_view kind = text.substr(1);  // ".val" etc.
  if (kind == ".val") {
    token.kind = Kind::val;
  } else if (kind == ".dx") {
    token.kind = Kind::dx;
  } else if (kind == ".dy") {
    token.kind = Kind::dy;
  } else if (kind == ".grad") {
    token.kind = Kind::grad;
  } else {
    throw Error("invalid form token '" + std::string(text) + "'");
  }
  return token;
}

namespace {

// Physical coordinates of the rule points on element t.
void physical_points(const FeMesh& fe_mesh, const Table& lambda, int t,
                     std::vector<Point>& out) {
  const auto& e = fe_mesh.mesh.elem[t];
  const Point& v1 = fe_mesh.mesh.node[e[0]];
  const Point& v2 = fe_mesh.mesh.node[e[1]];
  const Point& v3 = fe_mesh.mesh.node[e[2]];
  out.resize(lambda.rows());
  for (int g = 0; g < lambda.rows(); ++g) {
    out[g] = {lambda(g, 0) * v1.x + lambda(g, 1) * v2.x + lambda(g, 2) * v3.x,
              lambda(g, 0) * v1.y + lambda(g, 1) * v2.y + lambda(g, 2) * v3.y};
  }
}

Table constant_matrix(double c, int nt, int npts) {
  return Table(nt, npts, c);
}

Table function_matrix(const ScalarFn& f, const FeMesh& fe_mesh,
                      const Table& lambda) {
  const int nt = fe_mesh.num_elements();
  Table out(nt, lambda.rows());
  std::vector<Point> pts;
  for (int t = 0; t < nt; ++t) {
    physical_points(fe_mesh, lambda, t, pts);
    for (int g = 0; g < lambda.rows(); ++g) out(t, g) = f(pts[g]);
  }
  return out;
}

Table dof_matrix(const std::vector<double>& uh, Deriv w, const FeMesh& fe_mesh,
                 const FeSpace& space, const Table& lambda) {
  if (static_cast<int>(uh.size()) != space.ndof) {
    throw Error("interp2dMat: dof vector length " + std::to_string(uh.size()) +
                " does not match ndof " + std::to_string(space.ndof));
  }
  const RefBasis ref(space.degree, lambda);
  const ElemGeometry geom = barycentric_gradients(fe_mesh.mesh);
  const int nt = fe_mesh.num_elements();
  const int npts = lambda.rows();
  Table out(nt, npts);
  Table basis(ref.nloc(), npts);
  for (int t = 0; t < nt; ++t) {
    ref.eval(geom, t, w, basis);
    for (int g = 0; g < npts; ++g) {
      double acc = 0.0;
      for (int i = 0; i < ref.nloc(); ++i) {
        acc += uh[space.dof(t, i)] * basis(i, g);
      }
      out(t, g) = acc;
    }
  }
  return out;
}

}  // namespace

Table interp2dMat(const CoefSource& source, Deriv w, const FeMesh& fe_mesh,
                  const FeSpace& space, int quad_order) {
  const QuadRule2D rule = quadpts2(quad_order);
  if (std::holds_alternative<double>(source)) {
    if (w != Deriv::val) {
      throw Error("interp2dMat: only '.val' applies to a constant");
    }
    return constant_matrix(std::get<double>(source), fe_mesh.num_elements(),
                           rule.npts());
  }
  if (std::holds_alternative<ScalarFn>(source)) {
    if (w != Deriv::val) {
      throw Error("interp2dMat: only '.val' applies to a function handle");
    }
    return function_matrix(std::get<ScalarFn>(source), fe_mesh, rule.lambda);
  }
  return dof_matrix(std::get<std::vector<double>>(source), w, fe_mesh, space,
                    rule.lambda);
}

Table interp2dMat(const CoefSource& source, std::string_view w,
                  const FeMesh& fe_mesh, const FeSpace& space,
                  int quad_order) {
  return interp2dMat(source, deriv_from_string(w), fe_mesh, space, quad_order);
}

Table Coef::to_matrix(const FeMesh& fe_mesh, int quad_order) const {
  const QuadRule2D rule = quadpts2(quad_order);
  if (std::holds_alternative<double>(source_)) {
    return constant_matrix(std::get<double>(source_), fe_mesh.num_elements(),
                           rule.npts());
  }
  if (std::holds_alternative<ScalarFn>(source_)) {
    return function_matrix(std::get<ScalarFn>(source_), fe_mesh, rule.lambda);
  }
  const Table& m = std::get<Table>(source_);
  if (m.rows() != fe_mesh.num_elements() || m.cols() != rule.npts()) {
    throw Error("assem2d: coefficient matrix is " + std::to_string(m.rows()) +
                "x" + std::to_string(m.cols()) + ", expected " +
                std::to_string(fe_mesh.num_elements()) + "x" +
                std::to_string(rule.npts()) + " for this quadrature order");
  }
  return m;
}

namespace {

// Evaluation tables needed for one token on one element.
struct TokenEval {
  bool is_grad = false;
  Table a;  // val/dx/dy table, or the dx part of grad
  Table b;  // the dy part of grad
};

void eval_token(const RefBasis& ref, const ElemGeometry& geom, int t,
                FormToken::Kind kind, TokenEval& out) {
  switch (kind) {
    case FormToken::Kind::val:
      out.is_grad = false;
      ref.eval(geom, t, Deriv::val, out.a);
      return;
    case FormToken::Kind::dx:
      out.is_grad = false;
      ref.eval(geom, t, Deriv::dx, out.a);
      return;
    case FormToken::Kind::dy:
      out.is_grad = false;
      ref.eval(geom, t, Deriv::dy, out.a);
      return;
    case FormToken::Kind::grad:
      out.is_grad = true;
      ref.eval(geom, t, Deriv::dx, out.a);
      ref.eval(geom, t, Deriv::dy, out.b);
      return;
  }
  throw Error("assem2d: invalid token kind");
}

}  // namespace

SparseMatrix assem2d(const FeMesh& fe_mesh, const Coef& coef, FormToken test,
                     FormToken trial, const FeSpace& space, int quad_order) {
  if (test.side != FormToken::Side::test ||
      trial.side != FormToken::Side::trial) {
    throw Error("assem2d: expected a 'v.*' test token and a 'u.*' trial token");
  }
  if ((test.kind == FormToken::Kind::grad) !=
      (trial.kind == FormToken::Kind::grad)) {
    throw Error("assem2d: grad tokens only pair with grad tokens");
  }

  const QuadRule2D rule = quadpts2(quad_order);
  const Table cmat = coef.to_matrix(fe_mesh, quad_order);
  const RefBasis ref(space.degree, rule.lambda);
  const ElemGeometry geom = barycentric_gradients(fe_mesh.mesh);
  const int nt = fe_mesh.num_elements();
  const int nloc = space.nloc;
  const int ng = rule.npts();

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(nt) * nloc * nloc);

  TokenEval tv, tu;
  for (int t = 0; t < nt; ++t) {
    eval_token(ref, geom, t, test.kind, tv);
    eval_token(ref, geom, t, trial.kind, tu);
    const double area = geom.area[t];
    for (int i = 0; i < nloc; ++i) {
      for (int j = 0; j < nloc; ++j) {
        double acc = 0.0;
        if (tv.is_grad) {
          for (int g = 0; g < ng; ++g) {
            acc += rule.weight[g] * cmat(t, g) *
                   (tv.a(i, g) * tu.a(j, g) + tv.b(i, g) * tu.b(j, g));
          }
        } else {
          for (int g = 0; g < ng; ++g) {
            acc += rule.weight[g] * cmat(t, g) * tv.a(i, g) * tu.a(j, g);
          }
        }
        triplets.push_back({space.dof(t, i), space.dof(t, j), area * acc});
      }
    }
  }
  return SparseMatrix::from_triplets(space.ndof, std::move(triplets));
}

SparseMatrix assem2d(const FeMesh& fe_mesh, const Coef& coef,
                     std::string_view test, std::string_view trial,
                     const FeSpace& space, int quad_order) {
  return assem2d(fe_mesh, coef, FormToken::parse(test), FormToken::parse(trial),
                 space, quad_order);
}

std::vector<double> assem2d(const FeMesh& fe_mesh, const Coef& coef,
                            FormToken test, const FeSpace& space,
                            int quad_order) {
  if (test.side != FormToken::Side::test) {
    throw Error("assem2d: load assembly expects a 'v.*' token");
  }
  if (test.kind == FormToken::Kind::grad) {
    throw Error("assem2d: 'v.grad' needs a grad trial partner");
  }

  const QuadRule2D rule = quadpts2(quad_order);
  const Table cmat = coef.to_matrix(fe_mesh, quad_order);
  const RefBasis ref(space.degree, rule.lambda);
  const ElemGeometry geom = barycentric_gradients(fe_mesh.mesh);
  const int nt = fe_mesh.num_elements();
  const int ng = rule.npts();

  std::vector<double> b(space.ndof, 0.0);
  TokenEval tv;
  for (int t = 0; t < nt; ++t) {
    eval_token(ref, geom, t, test.kind, tv);
    const double area = geom.area[t];
    for (int i = 0; i < space.nloc; ++i) {
      double acc = 0.0;
      for (int g = 0; g < ng; ++g) {
        acc += rule.weight[g] * cmat(t, g) * tv.a(i, g);
      }
      b[space.dof(t, i)] += area * acc;
    }
  }
  return b;
}

std::vector<double> assem2d(const FeMesh& fe_mesh, const Coef& coef,
                            std::string_view test, const FeSpace& space,
                            int quad_order) {
  return assem2d(fe_mesh, coef, FormToken::parse(test), space, quad_order);
}

Integral2d integral2d(const FeMesh& fe_mesh, const Coef& coef,
                      const FeSpace& space, int quad_order) {
  (void)space;  // the rule and mesh fix the layout; kept for signature parity
  const QuadRule2D rule = quadpts2(quad_order);
  const Table cmat = coef.to_matrix(fe_mesh, quad_order);
  const ElemGeometry geom = barycentric_gradients(fe_mesh.mesh);
  const int nt = fe_mesh.num_elements();

  Integral2d result;
  result.per_element.resize(nt);
  for (int t = 0; t < nt; ++t) {
    double acc = 0.0;
    for (int g = 0; g < rule.npts(); ++g) {
      acc += rule.weight[g] * cmat(t, g);
    }
    result.per_element[t] = geom.area[t] * acc;
    result.total += result.per_element[t];
  }
  return result;
}

namespace {

std::vector<char> part_dof_mask(const FeMesh& fe_mesh, const FeSpace& space,
                                int part) {
  if (part < 0 || part >= fe_mesh.num_boundary_parts()) {
    throw Error("apply2d: no boundary part " + std::to_string(part));
  }
  const int n = fe_mesh.num_nodes();
  std::vector<char> mask(space.ndof, 0);
  for (int e : fe_mesh.bd_edge_idx_type[part]) {
    mask[fe_mesh.edge[e][0]] = 1;
    mask[fe_mesh.edge[e][1]] = 1;
    if (space.degree == 2) {
      mask[n + e] = 1;
    } else if (space.degree == 3) {
      mask[n + 2 * e] = 1;
      mask[n + 2 * e + 1] = 1;
    }
  }
  return mask;
}

}  // namespace

LinearSystem make_dirichlet_system(const SparseMatrix& A,
                                   const std::vector<double>& b,
                                   const FeMesh& fe_mesh, const FeSpace& space,
                                   int part, const ScalarFn& g_D) {
  if (A.size() != space.ndof || static_cast<int>(b.size()) != space.ndof) {
    throw Error("make_dirichlet_system: system size does not match the space");
  }
  LinearSystem sys;
  sys.A = A;
  sys.rhs = b;
  sys.constrained = part_dof_mask(fe_mesh, space, part);
  sys.bc_value.assign(space.ndof, 0.0);
  const std::vector<Point> pts = dof_points(fe_mesh, space);
  for (int d = 0; d < space.ndof; ++d) {
    if (sys.constrained[d]) sys.bc_value[d] = g_D(pts[d]);
  }
  return sys;
}

std::vector<double> solve_constrained(const LinearSystem& system,
                                      const SolveOptions& opts) {
  const int n = system.A.size();
  std::vector<int> free_dofs;
  free_dofs.reserve(n);
  for (int d = 0; d < n; ++d) {
    if (!system.constrained[d]) free_dofs.push_back(d);
  }

  std::vector<double> uh(n, 0.0);
  for (int d = 0; d < n; ++d) {
    if (system.constrained[d]) uh[d] = system.bc_value[d];
  }
  if (free_dofs.empty()) return uh;

  // Move the known boundary contributions to the right-hand side; the
  // reduced matrix on the free dofs stays SPD.
  std::vector<double> lifted = system.A.multiply(uh);
  std::vector<double> rhs_free(free_dofs.size());
  for (std::size_t i = 0; i < free_dofs.size(); ++i) {
    rhs_free[i] = system.rhs[free_dofs[i]] - lifted[free_dofs[i]];
  }
  const SparseMatrix a_free = system.A.extract(free_dofs);
  const std::vector<double> x = solve_sparse(a_free, rhs_free, opts);
  for (std::size_t i = 0; i < free_dofs.size(); ++i) {
    uh[free_dofs[i]] = x[i];
  }
  return uh;
}

std::vector<double> apply2d(int part, const FeMesh& fe_mesh,
                            const SparseMatrix& A, const std::vector<double>& b,
                            const FeSpace& space, const ScalarFn& g_D,
                            const SolveOptions& opts) {
  return solve_constrained(
      make_dirichlet_system(A, b, fe_mesh, space, part, g_D), opts);
}

double error_norm(const FeMesh& fe_mesh, const FeSpace& space,
                  const std::vector<double>& uh, const ScalarFn& exact,
                  const GradFn& exact_grad, ErrorNorm which, int quad_order) {
  if (quad_order < 2 * space.degree) {
    throw Error("error_norm: quad_order must be at least 2k");
  }
  if (static_cast<int>(uh.size()) != space.ndof) {
    throw Error("error_norm: dof vector does not match the space");
  }
  const bool need_val = which != ErrorNorm::H1semi;
  const bool need_grad = which != ErrorNorm::L2;
  if (need_grad && !exact_grad) {
    throw Error("error_norm: H1 norms need the exact gradient");
  }

  const QuadRule2D rule = quadpts2(quad_order);
  const RefBasis ref(space.degree, rule.lambda);
  const ElemGeometry geom = barycentric_gradients(fe_mesh.mesh);
  const int nt = fe_mesh.num_elements();
  const int ng = rule.npts();

  double acc_l2 = 0.0, acc_semi = 0.0;
  Table bval, bdx, bdy;
  std::vector<Point> pts;
  for (int t = 0; t < nt; ++t) {
    if (need_val) ref.eval(geom, t, Deriv::val, bval);
    if (need_grad) {
      ref.eval(geom, t, Deriv::dx, bdx);
      ref.eval(geom, t, Deriv::dy, bdy);
    }
    physical_points(fe_mesh, rule.lambda, t, pts);
    const double area = geom.area[t];
    for (int g = 0; g < ng; ++g) {
      double vh = 0.0, gxh = 0.0, gyh = 0.0;
      for (int i = 0; i < space.nloc; ++i) {
        const double c = uh[space.dof(t, i)];
        if (need_val) vh += c * bval(i, g);
        if (need_grad) {
          gxh += c * bdx(i, g);
          gyh += c * bdy(i, g);
        }
      }
      const double w = area * rule.weight[g];
      if (need_val) {
        const double d = exact(pts[g]) - vh;
        acc_l2 += w * d * d;
      }
      if (need_grad) {
        const Vec2 gu = exact_grad(pts[g]);
        const double dx = gu.x - gxh;
        const double dy = gu.y - gyh;
        acc_semi += w * (dx * dx + dy * dy);
      }
    }
  }

  switch (which) {
    case ErrorNorm::L2:
      return std::sqrt(acc_l2);
    case ErrorNorm::H1semi:
      return std::sqrt(acc_semi);
    case ErrorNorm::H1:
      return std::sqrt(acc_l2 + acc_semi);
  }
  throw Error("error_norm: invalid norm selector");
}

}  // namespace afem
