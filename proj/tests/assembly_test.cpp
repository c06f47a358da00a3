#include <doctest.h>

#include <cmath>
#include <random>

#include "afem/assembly.hpp"
#include "afem/error.hpp"
#include "test_support.hpp"

using namespace afem;
using testing::dense_gauss_solve;
using testing::two_triangle_mesh;

namespace {

FeMesh unit_right_fe() {
  Mesh m;
  m.node = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  m.elem = {{0, 1, 2}};
  return build_fe_mesh(m);
}

// Nodal interpolant of a function.
std::vector<double> interpolate(const FeMesh& fe, const FeSpace& space,
                                const ScalarFn& u) {
  const std::vector<Point> pts = dof_points(fe, space);
  std::vector<double> uh(space.ndof);
  for (int d = 0; d < space.ndof; ++d) uh[d] = u(pts[d]);
  return uh;
}

}  // namespace

TEST_SUITE_BEGIN("assembly");

TEST_CASE("interp2dMat") {
  const FeMesh fe = build_fe_mesh(square_mesh({0, 1, 0, 1}, 0.5, 0.5));
  const FeSpace space = build_dof_map(fe, 1);

  SUBCASE("constants broadcast") {
    const Table c = interp2dMat(CoefSource(1.0), ".val", fe, space, 3);
    REQUIRE(c.rows() == fe.num_elements());
    for (int t = 0; t < c.rows(); ++t) {
      for (int g = 0; g < c.cols(); ++g) CHECK(c(t, g) == 1.0);
    }
  }
  SUBCASE("dof vectors expand through the basis") {
    const std::vector<double> uh =
        interpolate(fe, space, [](Point p) { return p.x; });
    const Table ddx = interp2dMat(CoefSource(uh), ".dx", fe, space, 3);
    const Table dxx = interp2dMat(CoefSource(uh), ".dxx", fe, space, 3);
    for (int t = 0; t < ddx.rows(); ++t) {
      for (int g = 0; g < ddx.cols(); ++g) {
        CHECK(ddx(t, g) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(dxx(t, g) == doctest::Approx(0.0));
      }
    }
  }
  SUBCASE("nodal interpolation reproduces polynomials of degree k") {
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    const QuadRule2D rule = quadpts2(4);
    for (int k = 1; k <= 3; ++k) {
      CAPTURE(k);
      const FeSpace sp = build_dof_map(fe, k);
      // Random bivariate polynomial of total degree k.
      std::vector<double> c;
      for (int a = 0; a <= k; ++a) {
        for (int b = 0; a + b <= k; ++b) c.push_back(coeff(rng));
      }
      auto poly = [&](Point p) {
        double v = 0.0;
        int i = 0;
        for (int a = 0; a <= k; ++a) {
          for (int b = 0; a + b <= k; ++b) {
            v += c[i++] * std::pow(p.x, a) * std::pow(p.y, b);
          }
        }
        return v;
      };
      const std::vector<double> uh = interpolate(fe, sp, poly);
      const Table vals = interp2dMat(CoefSource(uh), ".val", fe, sp, 4);
      for (int t = 0; t < fe.num_elements(); ++t) {
        const auto& e = fe.mesh.elem[t];
        for (int g = 0; g < rule.npts(); ++g) {
          const Point p = {rule.lambda(g, 0) * fe.mesh.node[e[0]].x +
                               rule.lambda(g, 1) * fe.mesh.node[e[1]].x +
                               rule.lambda(g, 2) * fe.mesh.node[e[2]].x,
                           rule.lambda(g, 0) * fe.mesh.node[e[0]].y +
                               rule.lambda(g, 1) * fe.mesh.node[e[1]].y +
                               rule.lambda(g, 2) * fe.mesh.node[e[2]].y};
          CHECK(vals(t, g) ==
                doctest::Approx(poly(p)).epsilon(1e-12).scale(1.0));
        }
      }
    }
  }
  SUBCASE("function handles take .val only") {
    const ScalarFn f = [](Point p) { return p.x + p.y; };
    CHECK_NOTHROW(interp2dMat(CoefSource(f), ".val", fe, space, 3));
    CHECK_THROWS_AS(interp2dMat(CoefSource(f), ".dxx", fe, space, 3), Error);
    CHECK_THROWS_AS(interp2dMat(CoefSource(2.0), ".dx", fe, space, 3), Error);
  }
  SUBCASE("dof length must match") {
    std::vector<double> wrong(space.ndof + 1, 0.0);
    CHECK_THROWS_AS(interp2dMat(CoefSource(wrong), ".val", fe, space, 3),
                    Error);
  }
}

TEST_CASE("local P1 stiffness of the unit right triangle") {
  const FeMesh fe = unit_right_fe();
  const FeSpace space = build_dof_map(fe, 1);
  const SparseMatrix A = assem2d(fe, Coef(1.0), "v.grad", "u.grad", space, 2);
  const double expected[3][3] = {
      {1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}};
  for (int i = 0; i < 3; ++i) {
    std::vector<double> unit(3, 0.0);
    unit[i] = 1.0;
    const std::vector<double> col = A.multiply(unit);
    for (int j = 0; j < 3; ++j) {
      CHECK(col[j] == doctest::Approx(expected[j][i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("mass matrix sums to the domain area") {
  const FeMesh fe = build_fe_mesh(square_mesh({0, 2, 0, 1}, 0.25, 0.25));
  for (int k = 1; k <= 3; ++k) {
    CAPTURE(k);
    const FeSpace space = build_dof_map(fe, k);
    const SparseMatrix M =
        assem2d(fe, Coef(1.0), "v.val", "u.val", space, 2 * k);
    double sum = 0.0;
    for (double v : M.values()) sum += v;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("P1 load vector with unit source") {
  const FeMesh fe = build_fe_mesh(square_mesh({0, 1, 0, 1}, 0.5, 0.5));
  const FeSpace space = build_dof_map(fe, 1);
  const std::vector<double> b = assem2d(fe, Coef(1.0), "v.val", space, 3);
  const ElemGeometry geom = barycentric_gradients(fe.mesh);
  std::vector<double> expected(space.ndof, 0.0);
  for (int t = 0; t < fe.num_elements(); ++t) {
    for (int i = 0; i < 3; ++i) {
      expected[fe.mesh.elem[t][i]] += geom.area[t] / 3.0;
    }
  }
  for (int d = 0; d < space.ndof; ++d) {
    CHECK(b[d] == doctest::Approx(expected[d]).epsilon(1e-13));
  }
}

TEST_CASE("stiffness is symmetric with the constant kernel") {
  const FeMesh fe = build_fe_mesh(square_mesh({0, 1, 0, 1}, 0.25, 0.25));
  for (int k = 1; k <= 3; ++k) {
    CAPTURE(k);
    const FeSpace space = build_dof_map(fe, k);
    const SparseMatrix A =
        assem2d(fe, Coef(1.0), "v.grad", "u.grad", space, 2 * k);
    CHECK(A.max_asymmetry() < 1e-12);
    const std::vector<double> ones(space.ndof, 1.0);
    const std::vector<double> zero = A.multiply(ones);
    for (double v : zero) CHECK(std::abs(v) < 1e-12);

    // Positive semidefinite: x^T A x >= 0 up to roundoff.
    std::mt19937 rng(113 + k);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> x(space.ndof);
      for (double& v : x) v = entry(rng);
      const std::vector<double> ax = A.multiply(x);
      double quad = 0.0;
      for (int d = 0; d < space.ndof; ++d) quad += x[d] * ax[d];
      CHECK(quad > -1e-10);
    }
  }
}

TEST_CASE("token rules") {
  const FeMesh fe = unit_right_fe();
  const FeSpace space = build_dof_map(fe, 1);
  CHECK_THROWS_AS(assem2d(fe, Coef(1.0), "v.grad", "u.val", space, 2), Error);
  CHECK_THROWS_AS(assem2d(fe, Coef(1.0), "v.val", "v.val", space, 2), Error);
  CHECK_THROWS_AS(assem2d(fe, Coef(1.0), "u.val", space, 2), Error);
  CHECK_THROWS_AS(assem2d(fe, Coef(1.0), "v.grad", space, 2), Error);
  CHECK_THROWS_AS(FormToken::parse("w.val"), Error);
  CHECK_THROWS_AS(FormToken::parse("v.hess"), Error);
  CHECK_NOTHROW(assem2d(fe, Coef(1.0), "v.dx", "u.dy", space, 2));

  // Coefficient matrix shaped for a different rule is rejected.
  const Table wrong(fe.num_elements(), 99);
  CHECK_THROWS_AS(assem2d(fe, Coef(wrong), "v.val", "u.val", space, 2), Error);
}

TEST_CASE("integral2d") {
  const FeMesh fe = build_fe_mesh(square_mesh({0, 1, 0, 1}, 0.25, 0.25));
  const FeSpace space = build_dof_map(fe, 1);

  SUBCASE("unit integrand") {
    const Integral2d r = integral2d(fe, Coef(1.0), space, 3);
    CHECK(r.total == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("linear integrand") {
    const Integral2d r = integral2d(
        fe, Coef(ScalarFn([](Point p) { return p.x + p.y; })), space, 3);
    CHECK(r.total == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("per-element entries sum to the total") {
    const Integral2d r = integral2d(
        fe, Coef(ScalarFn([](Point p) { return std::sin(p.x * p.y); })),
        space, 4);
    double sum = 0.0;
    for (double v : r.per_element) sum += v;
    CHECK(sum == r.total);  // same accumulation order, bitwise equal
  }
}

TEST_CASE("solve_sparse") {
  SUBCASE("identity") {
    std::vector<Triplet> t{{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}};
    const SparseMatrix A = SparseMatrix::from_triplets(3, t);
    const std::vector<double> b{3.0, -1.0, 0.5};
    CHECK(solve_sparse(A, b) == b);
  }
  SUBCASE("2x2 by inspection") {
    std::vector<Triplet> t{{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 2.0}};
    const SparseMatrix A = SparseMatrix::from_triplets(2, t);
    const std::vector<double> x = solve_sparse(A, std::vector<double>{3.0, 3.0});
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("random SPD against the dense oracle") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    const int n = 50;
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) {
        dense[i][j] = dense[j][i] = entry(rng);
      }
      dense[i][i] += n;  // diagonally dominant, hence SPD
    }
    std::vector<Triplet> trips;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) trips.push_back({i, j, dense[i][j]});
    }
    const SparseMatrix A = SparseMatrix::from_triplets(n, trips);
    std::vector<double> b(n);
    for (double& v : b) v = entry(rng);

    const std::vector<double> oracle = dense_gauss_solve(dense, b);

    SolveStats stats;
    const std::vector<double> x1 = solve_sparse(A, b, {}, &stats);
    CHECK(stats.used_dense);
    SolveOptions iterative;
    iterative.force_iterative = true;
    const std::vector<double> x2 = solve_sparse(A, b, iterative, &stats);
    CHECK_FALSE(stats.used_dense);
    CHECK(stats.iterations > 0);
    for (int i = 0; i < n; ++i) {
      CHECK(x1[i] == doctest::Approx(oracle[i]).epsilon(1e-8));
      CHECK(x2[i] == doctest::Approx(oracle[i]).epsilon(1e-8));
    }
  }
  SUBCASE("failures carry the residual") {
    // Indefinite matrix: breakdown for both paths.
    std::vector<Triplet> t{{0, 0, 1.0}, {1, 1, -1.0}};
    const SparseMatrix A = SparseMatrix::from_triplets(2, t);
    const std::vector<double> b{1.0, 1.0};
    CHECK_THROWS_AS(solve_sparse(A, b), SolveError);
    SolveOptions iterative;
    iterative.force_iterative = true;
    CHECK_THROWS_AS(solve_sparse(A, b, iterative), SolveError);

    // Iteration cap too small: non-convergence reports progress so far.
    std::vector<Triplet> lap;
    const int n = 40;
    for (int i = 0; i < n; ++i) {
      lap.push_back({i, i, 2.0});
      if (i + 1 < n) {
        lap.push_back({i, i + 1, -1.0});
        lap.push_back({i + 1, i, -1.0});
      }
    }
    const SparseMatrix L = SparseMatrix::from_triplets(n, lap);
    std::vector<double> rhs(n, 1.0);
    SolveOptions capped;
    capped.force_iterative = true;
    capped.max_iterations = 2;
    try {
      solve_sparse(L, rhs, capped);
      FAIL("expected SolveError");
    } catch (const SolveError& err) {
      // The 2-norm residual of pcg is not monotone, so only positivity is
      // guaranteed after a capped run.
      CHECK(err.achieved_residual() > 0.0);
    }
  }
}

TEST_CASE("assembly is bitwise deterministic") {
  const FeMesh fe = build_fe_mesh(square_mesh({0, 1, 0, 1}, 0.2, 0.25));
  const FeSpace space = build_dof_map(fe, 2);
  const ScalarFn c = [](Point p) { return 1.0 + p.x * p.y; };
  const SparseMatrix a = assem2d(fe, Coef(c), "v.grad", "u.grad", space, 4);
  const SparseMatrix b = assem2d(fe, Coef(c), "v.grad", "u.grad", space, 4);
  CHECK(a.values() == b.values());
}

TEST_CASE("apply2d") {
  SUBCASE("patch test: P1 reproduces linears") {
    const FeMesh fe = build_fe_mesh(square_mesh({0, 1, 0, 1}, 0.25, 0.25));
    const FeSpace space = build_dof_map(fe, 1);
    const ScalarFn u = [](Point p) { return p.x + p.y; };
    const SparseMatrix A = assem2d(fe, Coef(1.0), "v.grad", "u.grad", space, 3);
    const std::vector<double> b = assem2d(fe, Coef(0.0), "v.val", space, 3);
    const std::vector<double> uh = apply2d(0, fe, A, b, space, u);
    const std::vector<double> ui = interpolate(fe, space, u);
    for (int d = 0; d < space.ndof; ++d) {
      CHECK(uh[d] == doctest::Approx(ui[d]).epsilon(1e-10));
    }
    const GradFn du = [](Point) -> Vec2 { return {1.0, 1.0}; };
    CHECK(error_norm(fe, space, uh, u, du, ErrorNorm::H1, 3) < 1e-10);
  }
  SUBCASE("zero data gives the zero solution") {
    const FeMesh fe = build_fe_mesh(square_mesh({0, 1, 0, 1}, 0.5, 0.5));
    const FeSpace space = build_dof_map(fe, 2);
    const SparseMatrix A = assem2d(fe, Coef(1.0), "v.grad", "u.grad", space, 4);
    const std::vector<double> b = assem2d(fe, Coef(0.0), "v.val", space, 4);
    const std::vector<double> uh =
        apply2d(0, fe, A, b, space, [](Point) { return 0.0; });
    for (double v : uh) CHECK(v == 0.0);
  }
  SUBCASE("Galerkin orthogonality on the iterative path") {
    const FeMesh fe = build_fe_mesh(square_mesh({0, 1, 0, 1}, 1.0 / 16, 1.0 / 16));
    const FeSpace space = build_dof_map(fe, 2);
    REQUIRE(space.ndof > 500);  // forces pcg
    const ScalarFn f = [](Point p) {
      return 2.0 * M_PI * M_PI * std::sin(M_PI * p.x) * std::sin(M_PI * p.y);
    };
    const SparseMatrix A = assem2d(fe, Coef(1.0), "v.grad", "u.grad", space, 4);
    const std::vector<double> b = assem2d(fe, Coef(f), "v.val", space, 4);
    const LinearSystem sys =
        make_dirichlet_system(A, b, fe, space, 0, [](Point) { return 0.0; });
    const std::vector<double> uh = solve_constrained(sys);
    const std::vector<double> r = A.multiply(uh);
    for (int d = 0; d < space.ndof; ++d) {
      if (!sys.constrained[d]) {
        CHECK(std::abs(r[d] - b[d]) < 1e-9);
      }
    }
  }
  SUBCASE("invalid boundary part") {
    const FeMesh fe = unit_right_fe();
    const FeSpace space = build_dof_map(fe, 1);
    const SparseMatrix A = assem2d(fe, Coef(1.0), "v.grad", "u.grad", space, 2);
    const std::vector<double> b = assem2d(fe, Coef(0.0), "v.val", space, 2);
    CHECK_THROWS_AS(apply2d(3, fe, A, b, space, [](Point) { return 0.0; }),
                    Error);
  }
  SUBCASE("empty Dirichlet part leaves a singular system") {
    // "x>5" matches nothing, so part 0 is empty and the reduced matrix is
    // the full stiffness, singular on constants.
    const FeMesh fe =
        build_fe_mesh(square_mesh({0, 1, 0, 1}, 0.5, 0.5), {"x>5"});
    const FeSpace space = build_dof_map(fe, 1);
    REQUIRE(fe.bd_edge_idx_type[0].empty());
    const SparseMatrix A = assem2d(fe, Coef(1.0), "v.grad", "u.grad", space, 3);
    const std::vector<double> b = assem2d(fe, Coef(1.0), "v.val", space, 3);
    CHECK_THROWS_AS(apply2d(0, fe, A, b, space, [](Point) { return 0.0; }),
                    SolveError);
  }
}

TEST_CASE("error_norm") {
  const FeMesh fe = build_fe_mesh(square_mesh({0, 1, 0, 1}, 0.25, 0.25));

  SUBCASE("own interpolant has zero error") {
    for (int k = 1; k <= 3; ++k) {
      CAPTURE(k);
      const FeSpace space = build_dof_map(fe, k);
      const ScalarFn u = [k](Point p) {
        return std::pow(p.x, k) + std::pow(p.y, k) - 0.5 * p.x;
      };
      const GradFn du = [k](Point p) -> Vec2 {
        return {k * std::pow(p.x, k - 1) - 0.5, k * std::pow(p.y, k - 1)};
      };
      const std::vector<double> uh = interpolate(fe, space, u);
      CHECK(error_norm(fe, space, uh, u, du, ErrorNorm::H1, 2 * k) < 1e-10);
    }
  }
  SUBCASE("L2 distance from zero") {
    const FeSpace space = build_dof_map(fe, 1);
    const std::vector<double> zero(space.ndof, 0.0);
    CHECK(error_norm(fe, space, zero, [](Point) { return 1.0; }, {},
                     ErrorNorm::L2, 2) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("P1 H1-semi error of x^2 decays at first order") {
    const ScalarFn u = [](Point p) { return p.x * p.x; };
    const GradFn du = [](Point p) -> Vec2 { return {2.0 * p.x, 0.0}; };
    std::vector<double> hs, errs;
    for (int n : {2, 4, 8, 16}) {
      const FeMesh mesh = build_fe_mesh(square_mesh({0, 1, 0, 1}, 1.0 / n, 1.0 / n));
      const FeSpace space = build_dof_map(mesh, 1);
      const std::vector<double> uh = interpolate(mesh, space, u);
      hs.push_back(1.0 / n);
      errs.push_back(error_norm(mesh, space, uh, u, du, ErrorNorm::H1semi, 4));
    }
    for (std::size_t i = 1; i < errs.size(); ++i) {
      CHECK(errs[i] == doctest::Approx(errs[i - 1] / 2.0).epsilon(0.02));
    }
  }
  SUBCASE("quadrature order precondition") {
    const FeSpace space = build_dof_map(fe, 3);
    const std::vector<double> uh(space.ndof, 0.0);
    CHECK_THROWS_AS(error_norm(fe, space, uh, [](Point) { return 0.0; }, {},
                               ErrorNorm::L2, 3),
                    Error);
  }
}

TEST_SUITE_END();
