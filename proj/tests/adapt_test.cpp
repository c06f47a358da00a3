#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "afem/adapt.hpp"
#include "afem/error.hpp"
#include "afem/mesh.hpp"
#include "test_support.hpp"

using namespace afem;
using testing::audit_conformity;
using testing::min_angle;
using testing::similarity_classes;
using testing::two_triangle_mesh;

namespace {

MarkedSet mark_all(const Mesh& mesh) {
  MarkedSet m;
  m.theta = 1.0;
  m.elements.resize(mesh.num_elements());
  for (int t = 0; t < mesh.num_elements(); ++t) m.elements[t] = t;
  return m;
}

void check_dorfler(const std::vector<double>& eta, double theta) {
  const MarkedSet marked = mark(eta, theta);
  double total = 0.0;
  for (double e : eta) total += e * e;
  double sum = 0.0;
  double smallest = 1e300;
  for (int t : marked.elements) {
    sum += eta[t] * eta[t];
    smallest = std::min(smallest, eta[t] * eta[t]);
  }
  CHECK(sum >= doctest::Approx(theta * total).epsilon(1e-12));
  if (!marked.elements.empty()) {
    // Greedy minimality: dropping the weakest marked element breaks the
    // bound.
    CHECK(sum - smallest < theta * total + 1e-12 * total);
  }
  // No unmarked element outranks a marked one.
  double weakest_marked = 1e300, strongest_unmarked = -1.0;
  std::set<int> in(marked.elements.begin(), marked.elements.end());
  for (int t = 0; t < static_cast<int>(eta.size()); ++t) {
    if (in.count(t)) {
      weakest_marked = std::min(weakest_marked, eta[t]);
    } else {
      strongest_unmarked = std::max(strongest_unmarked, eta[t]);
    }
  }
  if (!marked.elements.empty() && in.size() < eta.size()) {
    CHECK(weakest_marked >= strongest_unmarked);
  }
}

}  // namespace

TEST_SUITE_BEGIN("adapt");

TEST_CASE("mark golden cases") {
  SUBCASE("theta 0 marks nothing") {
    CHECK(mark({3.0, 2.0, 1.0}, 0.0).elements.empty());
  }
  SUBCASE("theta 1 marks every positive element") {
    const MarkedSet m = mark({3.0, 0.0, 1.0, 0.0}, 1.0);
    CHECK(m.elements == std::vector<int>{0, 2});
  }
  SUBCASE("greedy prefix") {
    // Squares 9, 4, 1; total 14; theta 0.5 needs 7, so the first alone.
    const MarkedSet m = mark({3.0, 2.0, 1.0}, 0.5);
    CHECK(m.elements == std::vector<int>{0});
  }
  SUBCASE("ties break toward the lower index") {
    const MarkedSet m = mark({2.0, 2.0, 2.0}, 0.34);
    CHECK(m.elements == std::vector<int>{0, 1});
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(mark({1.0}, -0.1), Error);
    CHECK_THROWS_AS(mark({1.0}, 1.1), Error);
    CHECK_THROWS_AS(mark({-1.0}, 0.5), Error);
  }
}

TEST_CASE("mark satisfies the bulk bound on random data") {
  std::mt19937 rng(61);
  std::uniform_real_distribution<double> value(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 40);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> eta(size(rng));
    for (double& e : eta) e = value(rng) < 0.15 ? 0.0 : value(rng);
    for (double theta : {0.0, 0.3, 0.7, 1.0}) {
      check_dorfler(eta, theta);
    }
  }
}

TEST_CASE("bisect splits a single marked triangle") {
  Mesh m;
  m.node = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  m.elem = {{0, 1, 2}};
  const RefinedMesh r = bisect(m, mark_all(m));
  CHECK(r.mesh.num_elements() == 2);
  CHECK(r.mesh.num_nodes() == 4);
  CHECK(audit_conformity(r.mesh));
  validate(r.mesh);
  // Both children lead with the refinement-edge midpoint (0.5, 0.5).
  for (int t = 0; t < 2; ++t) {
    CHECK(r.parent[t] == 0);
    CHECK(r.generation[t] == 1);
    const Point& apex = r.mesh.node[r.mesh.elem[t][0]];
    CHECK(apex.x == doctest::Approx(0.5));
    CHECK(apex.y == doctest::Approx(0.5));
  }
}

TEST_CASE("completion pulls in the diagonal neighbor") {
  const Mesh m = two_triangle_mesh();
  MarkedSet only_first;
  only_first.theta = 0.4;
  only_first.elements = {0};
  const RefinedMesh r = bisect(m, only_first);
  CHECK(r.mesh.num_nodes() == 5);
  CHECK(r.mesh.num_elements() == 4);
  CHECK(audit_conformity(r.mesh));
  validate(r.mesh);
  // Every element was split exactly once.
  for (int t = 0; t < 4; ++t) CHECK(r.generation[t] == 1);
}

TEST_CASE("marking everything doubles the element count") {
  for (int n : {1, 2, 3}) {
    const Mesh m = square_mesh({0, 1, 0, 1}, 1.0 / n, 1.0 / n);
    const RefinedMesh r = bisect(m, mark_all(m));
    CHECK(r.mesh.num_elements() == 2 * m.num_elements());
    // One new vertex per cell diagonal.
    CHECK(r.mesh.num_nodes() == m.num_nodes() + n * n);
    CHECK(audit_conformity(r.mesh));
  }
}

TEST_CASE("marked elements always get at least two children") {
  std::mt19937 rng(71);
  Mesh mesh = square_mesh({0, 1, 0, 1}, 0.5, 0.5);
  std::vector<int> gen;
  for (int round = 0; round < 6; ++round) {
    std::vector<double> eta(mesh.num_elements());
    for (double& e : eta) e = std::uniform_real_distribution<>(0.0, 1.0)(rng);
    const MarkedSet marked = mark(eta, 0.5);
    const RefinedMesh r = bisect(mesh, marked, gen);
    CHECK(audit_conformity(r.mesh));
    validate(r.mesh);

    std::vector<int> children(mesh.num_elements(), 0);
    for (std::size_t t = 0; t < r.parent.size(); ++t) ++children[r.parent[t]];
    for (int t : marked.elements) CHECK(children[t] >= 2);

    mesh = r.mesh;
    gen = r.generation;
  }
}

TEST_CASE("uniform bisection stays within four similarity classes") {
  // Scalene triangle with dyadic coordinates; the longest side is already
  // side 1.
  Mesh mesh;
  mesh.node = {{0.0, 0.0}, {1.0, 0.0}, {0.25, 0.75}};
  mesh.elem = {{0, 1, 2}};
  mesh = label_longest_edge(mesh);

  double previous_min = min_angle(mesh);
  std::vector<double> min_per_sweep;
  for (int sweep = 0; sweep < 6; ++sweep) {
    mesh = bisect(mesh, mark_all(mesh)).mesh;
    CHECK(audit_conformity(mesh));
    CHECK(similarity_classes(mesh) <= 4);
    min_per_sweep.push_back(min_angle(mesh));
  }
  CHECK(mesh.num_elements() == 64);
  // The minimum angle settles once the similarity classes saturate.
  CHECK(min_per_sweep.back() > 0.0);
  CHECK(min_per_sweep[5] == min_per_sweep[3]);
  CHECK(min_per_sweep[5] == min_per_sweep[4]);
  CHECK(min_per_sweep.back() <= previous_min);
}

TEST_CASE("bisect rejects bad input") {
  Mesh m = two_triangle_mesh();
  MarkedSet out_of_range;
  out_of_range.elements = {7};
  CHECK_THROWS_AS(bisect(m, out_of_range), Error);

  m.elem.push_back(m.elem[0]);  // edge with three incident elements
  CHECK_THROWS_AS(bisect(m, mark_all(m)), Error);

  Mesh bad_gen = two_triangle_mesh();
  MarkedSet none;
  CHECK_THROWS_AS(bisect(bad_gen, none, std::vector<int>{1}), Error);
}

TEST_SUITE_END();
