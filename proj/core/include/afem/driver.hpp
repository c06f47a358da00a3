#pragma once

#include <string>
#include <vector>

#include "afem/assembly.hpp"
#include "afem/mesh.hpp"
#include "afem/mesh_io.hpp"

namespace afem {

// Problem data: exact solution (when known), its gradient, the source
// f = -Laplace(u), and the Dirichlet data.
struct PdeData {
  std::string name;
  ScalarFn u;      // may be empty
  GradFn du;       // may be empty
  ScalarFn f;
  ScalarFn g_D;
  bool has_exact() const { return static_cast<bool>(u); }
};

// u = x y (1-x) (1-y) exp(-1000((x-0.5)^2 + (y-0.117)^2)) on the unit
// square, with closed-form gradient and source.
PdeData benchmark_gaussian_bump();

// A generic cubic polynomial solution; handy for smoke runs since every
// P3 discretization reproduces it exactly.
PdeData benchmark_polynomial();

// u = sin(pi x) sin(pi y), the usual smooth benchmark.
PdeData benchmark_sin();

// The three-step Poisson solve: stiffness (grad-grad), load (f, v.val),
// Dirichlet application on boundary part 0.
std::vector<double> solve_poisson(const FeMesh& fe_mesh, const PdeData& pde,
                                  const FeSpace& space, int quad_order);

struct AfemConfig {
  Rect rect{0.0, 1.0, 0.0, 1.0};
  double h1 = 0.125, h2 = 0.125;
  Mesh initial_mesh;            // used instead of rect/h when nonempty
  int degree = 1;
  int quad_order = 0;           // 0: default_quad_order(degree)
  double theta = 0.4;
  int max_iterations = 30;
  long dof_budget = 200000;
  bool boundary_jump = true;    // include boundary edges in the jump term
  std::vector<std::string> bd_str;
  std::string out_dir;          // empty: no files written
  int svg_every = 0;            // extra snapshots every n iterations
};

struct IterationRecord {
  int step = 0;
  int n_nodes = 0;
  int n_elements = 0;
  int ndof = 0;
  double eta = 0.0;
  double err_h1 = 0.0;  // NaN when the problem has no exact solution
  double err_l2 = 0.0;
  int marked = 0;
  double seconds = 0.0;
};

struct AfemResult {
  std::vector<IterationRecord> records;
  Mesh mesh;                // mesh of the last solve
  std::vector<double> uh;   // solution on that mesh
};

// SOLVE -> ESTIMATE -> MARK -> REFINE until max_iterations records exist or
// the next mesh would exceed the dof budget. When out_dir is set, writes
// records.csv incrementally (partial records survive an abort) and SVG
// snapshots of the initial and final meshes.
AfemResult afem_loop(const AfemConfig& config, const PdeData& pde);

// CSV columns: step,N,NT,ndof,eta,errH1,errL2,marked,seconds.
void export_csv(const std::vector<IterationRecord>& records,
                const std::string& path);
std::string csv_header();
std::string csv_row(const IterationRecord& record);

enum class FitX { ndof };
enum class FitY { eta, errH1 };

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Slope over the last half of the records; needs at least 5 records with
// positive y values.
double fit_rate(const std::vector<IterationRecord>& records, FitX x, FitY y);

}  // namespace afem
