#include "afem/driver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <utility>

#include "afem/adapt.hpp"
#include "afem/elements.hpp"
#include "afem/error.hpp"
#include "afem/estimator.hpp"
#include "afem/quadrature.hpp"

namespace afem {

PdeData benchmark_gaussian_bump() {
  constexpr double cx = 0.5, cy = 0.117, k = 1000.0;
  auto bump = [](double x, double y) {
    const double dx = x - cx, dy = y - cy;
    return std::exp(-k * (dx * dx + dy * dy));
  };
  PdeData pde;
  pde.name = "gaussian-bump";
  pde.u = [bump](Point p) {
    return p.x * p.y * (1.0 - p.x) * (1.0 - p.y) * bump(p.x, p.y);
  };
  pde.du = [bump](Point p) -> Vec2 {
    const double g = p.x * (1.0 - p.x), gp = 1.0 - 2.0 * p.x;
    const double h = p.y * (1.0 - p.y), hp = 1.0 - 2.0 * p.y;
    const double e = bump(p.x, p.y);
    return {h * e * (gp - 2.0 * k * (p.x - cx) * g),
            g * e * (hp - 2.0 * k * (p.y - cy) * h)};
  };
  pde.f = [bump](Point p) {
    const double g = p.x * (1.0 - p.x), gp = 1.0 - 2.0 * p.x;
    const double h = p.y * (1.0 - p.y), hp = 1.0 - 2.0 * p.y;
    const double e = bump(p.x, p.y);
    const double sx = p.x - cx, sy = p.y - cy;
    const double uxx =
        h * e * (-2.0 - 4.0 * k * sx * gp + (4.0 * k * k * sx * sx - 2.0 * k) * g);
    const double uyy =
        g * e * (-2.0 - 4.0 * k * sy * hp + (4.0 * k * k * sy * sy - 2.0 * k) * h);
    return -(uxx + uyy);
  };
  pde.g_D = pde.u;
  return pde;
}

PdeData benchmark_polynomial() {
  PdeData pde;
  pde.name = "polynomial";
  pde.u = [](Point p) {
    const double x = p.x, y = p.y;
    return x * x * x - 2.0 * x * x * y + x * y * y + x * x - y * y + 3.0;
  };
  pde.du = [](Point p) -> Vec2 {
    const double x = p.x, y = p.y;
    return {3.0 * x * x - 4.0 * x * y + y * y + 2.0 * x,
            -2.0 * x * x + 2.0 * x * y - 2.0 * y};
  };
  pde.f = [](Point p) { return 4.0 * p.y - 8.0 * p.x; };
  pde.g_D = pde.u;
  return pde;
}

PdeData benchmark_sin() {
  PdeData pde;
  pde.name = "sin";
  pde.u = [](Point p) { return std::sin(M_PI * p.x) * std::sin(M_PI * p.y); };
  pde.du = [](Point p) -> Vec2 {
    return {M_PI * std::cos(M_PI * p.x) * std::sin(M_PI * p.y),
            M_PI * std::sin(M_PI * p.x) * std::cos(M_PI * p.y)};
  };
  pde.f = [](Point p) {
    return 2.0 * M_PI * M_PI * std::sin(M_PI * p.x) * std::sin(M_PI * p.y);
  };
  pde.g_D = pde.u;
  return pde;
}

std::vector<double> solve_poisson(const FeMesh& fe_mesh, const PdeData& pde,
                                  const FeSpace& space, int quad_order) {
  const SparseMatrix kk =
      assem2d(fe_mesh, Coef(1.0), "v.grad", "u.grad", space, quad_order);
  const std::vector<double> ff =
      assem2d(fe_mesh, Coef(pde.f), "v.val", space, quad_order);
  return apply2d(0, fe_mesh, kk, ff, space, pde.g_D);
}

std::string csv_header() {
  return "step,N,NT,ndof,eta,errH1,errL2,marked,seconds";
}

std::string csv_row(const IterationRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%.17g,%.17g,%.17g,%d,%.3f",
                r.step, r.n_nodes, r.n_elements, r.ndof, r.eta, r.err_h1,
                r.err_l2, r.marked, r.seconds);
  return buf;
}

void export_csv(const std::vector<IterationRecord>& records,
                const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << csv_header() << '\n';
  for (const auto& r : records) out << csv_row(r) << '\n';
  if (!out) throw Error("write failed for '" + path + "'");
}

AfemResult afem_loop(const AfemConfig& config, const PdeData& pde) {
  if (config.theta < 0.0 || config.theta > 1.0) {
    throw Error("afem_loop: theta must lie in [0,1]");
  }
  if (config.max_iterations < 1) {
    throw Error("afem_loop: max_iterations must be at least 1");
  }
  const int quad_order = config.quad_order > 0
                             ? config.quad_order
                             : default_quad_order(config.degree);
  const int err_order = std::min(
      kMaxQuadOrder, std::max(quad_order + 2, 2 * config.degree));

  Mesh mesh = config.initial_mesh.node.empty()
                  ? square_mesh(config.rect, config.h1, config.h2)
                  : config.initial_mesh;
  std::vector<int> generation;

  const bool writing = !config.out_dir.empty();
  std::ofstream csv;
  if (writing) {
    std::filesystem::create_directories(config.out_dir);
    export_mesh_svg(mesh, config.out_dir + "/mesh_initial.svg");
    csv.open(config.out_dir + "/records.csv");
    if (!csv) {
      throw Error("cannot open '" + config.out_dir + "/records.csv'");
    }
    csv << csv_header() << '\n' << std::flush;
  }

  AfemResult result;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (int step = 0; step < config.max_iterations; ++step) {
    const FeMesh fe_mesh = build_fe_mesh(mesh, config.bd_str);
    const FeSpace space = build_dof_map(fe_mesh, config.degree);
    if (space.ndof > config.dof_budget && !result.records.empty()) break;

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> uh =
        solve_poisson(fe_mesh, pde, space, quad_order);
    const Indicator ind = indicator(fe_mesh, space, uh, pde.f, quad_order,
                                    config.boundary_jump);
    const MarkedSet marked = mark(ind.eta, config.theta);

    IterationRecord rec;
    rec.step = step;
    rec.n_nodes = mesh.num_nodes();
    rec.n_elements = mesh.num_elements();
    rec.ndof = space.ndof;
    rec.eta = ind.total();
    if (pde.has_exact()) {
      rec.err_h1 = error_norm(fe_mesh, space, uh, pde.u, pde.du,
                              ErrorNorm::H1, err_order);
      rec.err_l2 = error_norm(fe_mesh, space, uh, pde.u, {}, ErrorNorm::L2,
                              err_order);
    } else {
      rec.err_h1 = nan;
      rec.err_l2 = nan;
    }
    rec.marked = static_cast<int>(marked.elements.size());
    rec.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    result.records.push_back(rec);
    result.mesh = mesh;
    result.uh = uh;
    if (writing) {
      csv << csv_row(rec) << '\n' << std::flush;
      if (config.svg_every > 0 && step > 0 && step % config.svg_every == 0) {
        char name[64];
        std::snprintf(name, sizeof(name), "/mesh_%04d.svg", step);
        export_mesh_svg(mesh, config.out_dir + name);
      }
    }

    if (step + 1 == config.max_iterations) break;
    RefinedMesh refined = bisect(mesh, marked, generation);
    mesh = std::move(refined.mesh);
    generation = std::move(refined.generation);
  }

  if (writing) {
    export_mesh_svg(result.mesh, config.out_dir + "/mesh_final.svg");
  }
  return result;
}

double loglog_slope(const std::vector<double>& x,
                    const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error("loglog_slope: need at least two matching samples");
  }
  const int n = static_cast<int>(x.size());
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw Error("loglog_slope: samples must be positive");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw Error("loglog_slope: degenerate abscissa");
  return sxy / sxx;
}

double fit_rate(const std::vector<IterationRecord>& records, FitX x, FitY y) {
  (void)x;  // ndof is the only abscissa
  std::vector<double> xs, ys;
  for (const auto& r : records) {
    const double v = y == FitY::eta ? r.eta : r.err_h1;
    if (v > 0.0 && r.ndof > 0) {
      xs.push_back(static_cast<double>(r.ndof));
      ys.push_back(v);
    }
  }
  if (xs.size() < 5) {
    throw Error("fit_rate: need at least 5 records with positive values");
  }
  const std::size_t start = xs.size() / 2;
  const std::vector<double> tail_x(xs.begin() + start, xs.end());
  const std::vector<double> tail_y(ys.begin() + start, ys.end());
  return loglog_slope(tail_x, tail_y);
}

}  // namespace afem
