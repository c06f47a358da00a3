#pragma once

#include <functional>
#include <string_view>
#include <variant>
#include <vector>

#include "afem/elements.hpp"
#include "afem/linalg.hpp"
#include "afem/mesh.hpp"
#include "afem/quadrature.hpp"
#include "afem/table.hpp"

namespace afem {

using ScalarFn = std::function<double(Point)>;
using GradFn = std::function<Vec2(Point)>;

// One factor of a variational term: the side it acts on and the derivative
// taken. grad only pairs with grad (the pairing contracts the two gradient
// components).
struct FormToken {
  enum class Side { test, trial };
  enum class Kind { val, dx, dy, grad };

  Side side = Side::test;
  Kind kind = Kind::val;

  // "v.val", "v.dx", "v.dy", "v.grad" and the "u." counterparts.
  static FormToken parse(std::string_view text);
};

// Sources interp2dMat can expand into a coefficient matrix: a constant or a
// function handle (with '.val' only), or a dof vector of a finite element
// function (any selector).
using CoefSource = std::variant<double, ScalarFn, std::vector<double>>;

// NT x n_g matrix of quadrature-point values: entry (i, j) is the source
// evaluated at quadrature point j of element i.
Table interp2dMat(const CoefSource& source, Deriv w, const FeMesh& fe_mesh,
                  const FeSpace& space, int quad_order);
Table interp2dMat(const CoefSource& source, std::string_view w,
                  const FeMesh& fe_mesh, const FeSpace& space, int quad_order);

// Coefficient argument of the assembly routines: constant, function handle,
// or an already expanded coefficient matrix.
class Coef {
 public:
  Coef(double c) : source_(c) {}             // NOLINT(google-explicit-constructor)
  Coef(ScalarFn f) : source_(std::move(f)) {}  // NOLINT
  Coef(Table coef_mat) : source_(std::move(coef_mat)) {}  // NOLINT
  Coef(const char* expr_is_not_supported) = delete;

  // Expands to the matrix form for the quadrature rule of the given order.
  Table to_matrix(const FeMesh& fe_mesh, int quad_order) const;

 private:
  std::variant<double, ScalarFn, Table> source_;
};

// Bilinear form: entries sum |K| w_g c(p_g) T(phi_i)(p_g) T'(phi_j)(p_g)
// over elements and quadrature points.
SparseMatrix assem2d(const FeMesh& fe_mesh, const Coef& coef, FormToken test,
                     FormToken trial, const FeSpace& space, int quad_order);
SparseMatrix assem2d(const FeMesh& fe_mesh, const Coef& coef,
                     std::string_view test, std::string_view trial,
                     const FeSpace& space, int quad_order);

// Linear form (load vector).
std::vector<double> assem2d(const FeMesh& fe_mesh, const Coef& coef,
                            FormToken test, const FeSpace& space,
                            int quad_order);
std::vector<double> assem2d(const FeMesh& fe_mesh, const Coef& coef,
                            std::string_view test, const FeSpace& space,
                            int quad_order);

struct Integral2d {
  double total = 0.0;
  std::vector<double> per_element;
};
Integral2d integral2d(const FeMesh& fe_mesh, const Coef& coef,
                      const FeSpace& space, int quad_order);

// Assembled system with Dirichlet bookkeeping. After application the
// constrained rows are identity rows and the right-hand side carries the
// boundary values.
struct LinearSystem {
  SparseMatrix A;
  std::vector<double> rhs;
  std::vector<char> constrained;  // ndof flags
  std::vector<double> bc_value;   // ndof, meaningful where constrained
};

LinearSystem make_dirichlet_system(const SparseMatrix& A,
                                   const std::vector<double>& b,
                                   const FeMesh& fe_mesh, const FeSpace& space,
                                   int part, const ScalarFn& g_D);

// Solves the constrained system by symmetric elimination: boundary
// contributions move to the right-hand side and the reduced SPD system is
// solved on the free dofs. Returns the full solution vector.
std::vector<double> solve_constrained(const LinearSystem& system,
                                      const SolveOptions& opts = {});

// Dirichlet solve on boundary part `part` (0-based): fixes the dofs of that
// part to g_D evaluated at their nodes, solves, returns the full vector.
std::vector<double> apply2d(int part, const FeMesh& fe_mesh,
                            const SparseMatrix& A, const std::vector<double>& b,
                            const FeSpace& space, const ScalarFn& g_D,
                            const SolveOptions& opts = {});

enum class ErrorNorm { L2, H1semi, H1 };

// Quadrature approximation of ||u - u_h|| in the requested norm.
// exact_grad may be empty for the L2 norm.
double error_norm(const FeMesh& fe_mesh, const FeSpace& space,
                  const std::vector<double>& uh, const ScalarFn& exact,
                  const GradFn& exact_grad, ErrorNorm which, int quad_order);

}  // namespace afem
