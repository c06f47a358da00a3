#include <doctest.h>

#include <cmath>
#include <random>

#include "afem/elements.hpp"
#include "afem/error.hpp"
#include "afem/quadrature.hpp"
#include "test_support.hpp"

using namespace afem;
using testing::cart2bary;
using testing::two_triangle_mesh;

namespace {

Mesh unit_right_triangle() {
  Mesh m;
  m.node = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  m.elem = {{0, 1, 2}};
  return m;
}

Mesh random_triangle(std::mt19937& rng) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  Mesh m;
  while (true) {
    m.node = {{coord(rng), coord(rng)},
              {coord(rng), coord(rng)},
              {coord(rng), coord(rng)}};
    m.elem = {{0, 1, 2}};
    const double area = signed_area(m.node[0], m.node[1], m.node[2]);
    if (area > 0.05) return m;
    if (area < -0.05) {
      std::swap(m.elem[0][1], m.elem[0][2]);
      return m;
    }
  }
}

// Random barycentric points strictly inside the triangle.
Table interior_points(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> u(0.05, 0.9);
  Table pts(n, 3);
  for (int i = 0; i < n; ++i) {
    double a = u(rng), b = u(rng) * (1.0 - a);
    pts(i, 0) = a;
    pts(i, 1) = b;
    pts(i, 2) = 1.0 - a - b;
  }
  return pts;
}

}  // namespace

TEST_SUITE_BEGIN("elements");

TEST_CASE("barycentric gradients on the unit right triangle") {
  const ElemGeometry geom = barycentric_gradients(unit_right_triangle());
  CHECK(geom.area[0] == doctest::Approx(0.5));
  CHECK(geom.grad_lambda[0][0].x == doctest::Approx(-1.0));
  CHECK(geom.grad_lambda[0][0].y == doctest::Approx(-1.0));
  CHECK(geom.grad_lambda[0][1].x == doctest::Approx(1.0));
  CHECK(geom.grad_lambda[0][1].y == doctest::Approx(0.0));
  CHECK(geom.grad_lambda[0][2].x == doctest::Approx(0.0));
  CHECK(geom.grad_lambda[0][2].y == doctest::Approx(1.0));
}

TEST_CASE("barycentric gradients sum to zero and match differences") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    const Mesh m = random_triangle(rng);
    const ElemGeometry geom = barycentric_gradients(m);
    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < 3; ++i) {
      sx += geom.grad_lambda[0][i].x;
      sy += geom.grad_lambda[0][i].y;
    }
    CHECK(std::abs(sx) < 1e-13);
    CHECK(std::abs(sy) < 1e-13);

    // Finite differences of the area-ratio barycentric functions, in the
    // element's vertex order.
    const double h = 1e-6;
    const Point& v1 = m.node[m.elem[0][0]];
    const Point& v2 = m.node[m.elem[0][1]];
    const Point& v3 = m.node[m.elem[0][2]];
    const Point c = {(v1.x + v2.x + v3.x) / 3.0, (v1.y + v2.y + v3.y) / 3.0};
    for (int i = 0; i < 3; ++i) {
      auto lam = [&](Point p) { return cart2bary(v1, v2, v3, p)[i]; };
      const double fx =
          (lam({c.x + h, c.y}) - lam({c.x - h, c.y})) / (2.0 * h);
      const double fy =
          (lam({c.x, c.y + h}) - lam({c.x, c.y - h})) / (2.0 * h);
      CHECK(geom.grad_lambda[0][i].x == doctest::Approx(fx).epsilon(1e-6));
      CHECK(geom.grad_lambda[0][i].y == doctest::Approx(fy).epsilon(1e-6));
    }
  }
}

TEST_CASE("degenerate triangles are rejected") {
  Mesh m;
  m.node = {{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
  m.elem = {{0, 1, 2}};
  CHECK_THROWS_AS(barycentric_gradients(m), Error);
}

TEST_CASE("selector parsing") {
  CHECK(deriv_from_string(".val") == Deriv::val);
  CHECK(deriv_from_string(".dxx") == Deriv::dxx);
  CHECK_THROWS_AS(deriv_from_string(".dz"), Error);
  CHECK_THROWS_AS(deriv_from_string("val"), Error);
}

TEST_CASE("nodal bases evaluate to the identity at their nodes") {
  // Vertices for every degree; the full nodal point sets are covered by the
  // interpolation test below.
  Table vertices(3, 3);
  for (int i = 0; i < 3; ++i) vertices(i, i) = 1.0;
  const Mesh m = unit_right_triangle();
  for (int k = 1; k <= 3; ++k) {
    const BasisTable table = basis_eval(k, vertices, Deriv::val, m);
    for (int i = 0; i < 3; ++i) {
      for (int p = 0; p < 3; ++p) {
        CHECK(table.base[i](0, p) == doctest::Approx(i == p ? 1.0 : 0.0));
      }
    }
  }
}

TEST_CASE("P2 side bubble peaks at the side midpoint") {
  Table pt(1, 3);
  pt(0, 0) = 0.0;
  pt(0, 1) = 0.5;
  pt(0, 2) = 0.5;
  const BasisTable table = basis_eval(2, pt, Deriv::val, unit_right_triangle());
  CHECK(table.base[3](0, 0) == doctest::Approx(1.0));  // bubble of side 1
  for (int i = 0; i < 3; ++i) {
    CHECK(table.base[i](0, 0) == doctest::Approx(0.0));
  }
  CHECK(table.base[4](0, 0) == doctest::Approx(0.0));
  CHECK(table.base[5](0, 0) == doctest::Approx(0.0));
}

TEST_CASE("P1 second derivatives vanish identically") {
  std::mt19937 rng(5);
  const Table pts = interior_points(rng, 6);
  const BasisTable table = basis_eval(1, pts, Deriv::dxx, two_triangle_mesh());
  for (const auto& b : table.base) {
    for (int t = 0; t < b.rows(); ++t) {
      for (int p = 0; p < b.cols(); ++p) CHECK(b(t, p) == 0.0);
    }
  }
}

TEST_CASE("partition of unity") {
  std::mt19937 rng(17);
  const Table pts = interior_points(rng, 8);
  const Mesh mesh = square_mesh({0, 1, 0, 1}, 0.5, 1.0);
  for (int k = 1; k <= 3; ++k) {
    CAPTURE(k);
    const BasisTable val = basis_eval(k, pts, Deriv::val, mesh);
    const BasisTable ddx = basis_eval(k, pts, Deriv::dx, mesh);
    const BasisTable ddy = basis_eval(k, pts, Deriv::dy, mesh);
    for (int t = 0; t < mesh.num_elements(); ++t) {
      for (int p = 0; p < pts.rows(); ++p) {
        double sv = 0.0, sx = 0.0, sy = 0.0;
        for (int i = 0; i < local_dof_count(k); ++i) {
          sv += val.base[i](t, p);
          sx += ddx.base[i](t, p);
          sy += ddy.base[i](t, p);
        }
        CHECK(sv == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(sx) < 1e-12);
        CHECK(std::abs(sy) < 1e-12);
      }
    }
  }
}

TEST_CASE("dof counts on the two-triangle mesh") {
  const FeMesh fe = build_fe_mesh(two_triangle_mesh());
  const FeSpace p1 = build_dof_map(fe, 1);
  CHECK(p1.ndof == 4);
  for (int t = 0; t < 2; ++t) {
    for (int i = 0; i < 3; ++i) CHECK(p1.dof(t, i) == fe.mesh.elem[t][i]);
  }
  CHECK(build_dof_map(fe, 2).ndof == 9);
  CHECK(build_dof_map(fe, 3).ndof == 16);
  CHECK_THROWS_AS(build_dof_map(fe, 4), Error);
}

TEST_CASE("elem2dof is consistent with the nodal points") {
  // Every local dof must sit at the physical node of its global dof; this
  // pins the shared-edge ordering for P2/P3 across neighboring elements.
  const FeMesh fe = build_fe_mesh(square_mesh({0, 1, 0, 1}, 1.0 / 3, 0.5));
  for (int k = 2; k <= 3; ++k) {
    CAPTURE(k);
    const FeSpace space = build_dof_map(fe, k);
    const std::vector<Point> pts = dof_points(fe, space);

    // Reference nodal barycentric coordinates in local dof order.
    std::vector<std::array<double, 3>> local;
    for (int i = 0; i < 3; ++i) {
      std::array<double, 3> l{};
      l[i] = 1.0;
      local.push_back(l);
    }
    constexpr int from[3] = {1, 2, 0}, to[3] = {2, 0, 1};
    if (k == 2) {
      for (int s = 0; s < 3; ++s) {
        std::array<double, 3> l{};
        l[from[s]] = 0.5;
        l[to[s]] = 0.5;
        local.push_back(l);
      }
    } else {
      for (int s = 0; s < 3; ++s) {
        std::array<double, 3> a{}, b{};
        a[from[s]] = 2.0 / 3;
        a[to[s]] = 1.0 / 3;
        b[from[s]] = 1.0 / 3;
        b[to[s]] = 2.0 / 3;
        local.push_back(a);
        local.push_back(b);
      }
      local.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3});
    }

    for (int t = 0; t < fe.num_elements(); ++t) {
      const Point& v1 = fe.mesh.node[fe.mesh.elem[t][0]];
      const Point& v2 = fe.mesh.node[fe.mesh.elem[t][1]];
      const Point& v3 = fe.mesh.node[fe.mesh.elem[t][2]];
      for (int i = 0; i < space.nloc; ++i) {
        const auto& l = local[i];
        const Point expected = {l[0] * v1.x + l[1] * v2.x + l[2] * v3.x,
                                l[0] * v1.y + l[1] * v2.y + l[2] * v3.y};
        const Point& got = pts[space.dof(t, i)];
        CHECK(got.x == doctest::Approx(expected.x).epsilon(1e-13));
        CHECK(got.y == doctest::Approx(expected.y).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("physical derivatives match finite differences of values") {
  std::mt19937 rng(23);
  for (int k = 1; k <= 3; ++k) {
    CAPTURE(k);
    for (int trial = 0; trial < 5; ++trial) {
      const Mesh m = random_triangle(rng);
      const Point& v1 = m.node[m.elem[0][0]];
      const Point& v2 = m.node[m.elem[0][1]];
      const Point& v3 = m.node[m.elem[0][2]];
      const Point c = {(v1.x + v2.x + v3.x) / 3.0, (v1.y + v2.y + v3.y) / 3.0};
      const double h = 1e-6;

      auto eval_at = [&](Point p, Deriv w, int i) {
        const auto l = cart2bary(v1, v2, v3, p);
        Table pt(1, 3);
        pt(0, 0) = l[0];
        pt(0, 1) = l[1];
        pt(0, 2) = l[2];
        return basis_eval(k, pt, w, m).base[i](0, 0);
      };

      for (int i = 0; i < local_dof_count(k); ++i) {
        const double fx = (eval_at({c.x + h, c.y}, Deriv::val, i) -
                           eval_at({c.x - h, c.y}, Deriv::val, i)) /
                          (2.0 * h);
        const double fy = (eval_at({c.x, c.y + h}, Deriv::val, i) -
                           eval_at({c.x, c.y - h}, Deriv::val, i)) /
                          (2.0 * h);
        CHECK(eval_at(c, Deriv::dx, i) ==
              doctest::Approx(fx).epsilon(1e-6).scale(1.0));
        CHECK(eval_at(c, Deriv::dy, i) ==
              doctest::Approx(fy).epsilon(1e-6).scale(1.0));
        // Second derivatives against differences of the first.
        const double fxx = (eval_at({c.x + h, c.y}, Deriv::dx, i) -
                            eval_at({c.x - h, c.y}, Deriv::dx, i)) /
                           (2.0 * h);
        const double fyy = (eval_at({c.x, c.y + h}, Deriv::dy, i) -
                            eval_at({c.x, c.y - h}, Deriv::dy, i)) /
                           (2.0 * h);
        CHECK(eval_at(c, Deriv::dxx, i) ==
              doctest::Approx(fxx).epsilon(1e-5).scale(1.0));
        CHECK(eval_at(c, Deriv::dyy, i) ==
              doctest::Approx(fyy).epsilon(1e-5).scale(1.0));
      }
    }
  }
}

TEST_SUITE_END();
