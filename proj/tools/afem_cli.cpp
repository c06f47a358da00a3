// Command-line driver for the adaptive Poisson solver: runs the
// solve/estimate/mark/refine loop and writes records.csv plus SVG mesh
// snapshots into the output directory.
//
// Examples:
//   afem --problem gaussian-bump --degree 1 --theta 0.4 --max-it 30 --out run
//   afem --problem polynomial --degree 2 --h 0.25 --out run2
//   afem --problem custom-file --problem-file problem.txt --out run3
//
// A problem file is a list of `key = expression` lines (expressions in x
// and y): required `f` and `g_D`, optional `u`, `ux`, `uy` to enable error
// columns, optional `mesh = path` pointing at a mesh text file ("N NT"
// header, N coordinate lines, NT 1-based connectivity lines).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "afem/afem.hpp"

namespace {

struct CustomProblem {
  afem::PdeData pde;
  std::optional<afem::Mesh> mesh;
};

std::string trim(const std::string& s) {
  const auto from = s.find_first_not_of(" \t\r");
  if (from == std::string::npos) return "";
  const auto to = s.find_last_not_of(" \t\r");
  return s.substr(from, to - from + 1);
}

CustomProblem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw afem::Error("cannot open problem file '" + path + "'");

  std::optional<afem::ScalarExpression> u, ux, uy, f, g_d;
  std::optional<afem::Mesh> mesh;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw afem::Error("problem file line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key == "mesh") {
      mesh = afem::read_mesh_text_file(value);
    } else if (key == "f" || key == "g_D" || key == "u" || key == "ux" ||
               key == "uy") {
      auto expr = afem::ScalarExpression::parse(value);
      if (key == "f") f = expr;
      if (key == "g_D") g_d = expr;
      if (key == "u") u = expr;
      if (key == "ux") ux = expr;
      if (key == "uy") uy = expr;
    } else {
      throw afem::Error("problem file line " + std::to_string(line_no) +
                        ": unknown key '" + key + "'");
    }
  }
  if (!f || !g_d) {
    throw afem::Error("problem file must define at least 'f' and 'g_D'");
  }
  if ((ux.has_value() || uy.has_value()) != (ux.has_value() && uy.has_value())) {
    throw afem::Error("problem file needs both 'ux' and 'uy' or neither");
  }

  CustomProblem problem;
  problem.pde.name = "custom-file";
  problem.pde.f = [e = *f](afem::Point p) { return e(p.x, p.y); };
  problem.pde.g_D = [e = *g_d](afem::Point p) { return e(p.x, p.y); };
  if (u && ux) {
    problem.pde.u = [e = *u](afem::Point p) { return e(p.x, p.y); };
    problem.pde.du = [ex = *ux, ey = *uy](afem::Point p) -> afem::Vec2 {
      return {ex(p.x, p.y), ey(p.x, p.y)};
    };
  }
  problem.mesh = mesh;
  return problem;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive P1/P2/P3 finite element solver for the 2D Poisson "
               "equation"};
  app.set_help_flag("--help", "Print help and exit");  // frees -h for --h

  std::string problem = "gaussian-bump";
  std::string problem_file;
  std::string out_dir = "afem-out";
  std::vector<double> rect = {0.0, 1.0, 0.0, 1.0};
  std::vector<double> h = {0.125};
  std::vector<std::string> bd_str;
  std::string boundary_jump = "on";
  afem::AfemConfig config;

  app.add_option("--problem", problem, "Benchmark problem")
      ->check(CLI::IsMember({"gaussian-bump", "polynomial", "custom-file"}))
      ->capture_default_str();
  app.add_option("--problem-file", problem_file,
                 "Problem definition file (with --problem custom-file)");
  app.add_option("--degree", config.degree, "Element degree k")
      ->check(CLI::Range(1, 3))
      ->capture_default_str();
  app.add_option("--theta", config.theta, "Dörfler marking parameter")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--max-it", config.max_iterations, "Maximum iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--quad-order", config.quad_order,
                 "Quadrature order (0 = pick from the degree)")
      ->check(CLI::Range(0, afem::kMaxQuadOrder))
      ->capture_default_str();
  app.add_option("--rect", rect, "Domain rectangle x1 x2 y1 y2")
      ->expected(4);
  app.add_option("--h", h, "Initial cell size, one value or h1 h2")
      ->expected(1, 2);
  app.add_option("--dof-budget", config.dof_budget, "Stop above this many dofs")
      ->capture_default_str();
  app.add_option("--boundary-jump", boundary_jump,
                 "Include boundary edges in the jump term")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  app.add_option("--bd-str", bd_str,
                 "Boundary part predicate, e.g. 'x==1' (repeatable; Dirichlet "
                 "data applies to the first part)");
  app.add_option("--svg-every", config.svg_every,
                 "Extra SVG snapshot every n iterations (0 = off)")
      ->capture_default_str();
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints the message or the help text
    return code == 0 ? 0 : 1;
  }

  try {
    config.rect = {rect[0], rect[1], rect[2], rect[3]};
    config.h1 = h[0];
    config.h2 = h.size() > 1 ? h[1] : h[0];
    config.boundary_jump = boundary_jump == "on";
    config.bd_str = bd_str;
    config.out_dir = out_dir;

    afem::PdeData pde;
    if (problem == "gaussian-bump") {
      pde = afem::benchmark_gaussian_bump();
    } else if (problem == "polynomial") {
      pde = afem::benchmark_polynomial();
    } else {
      if (problem_file.empty()) {
        throw afem::Error("--problem custom-file needs --problem-file");
      }
      CustomProblem custom = load_problem_file(problem_file);
      pde = custom.pde;
      if (custom.mesh) {
        config.initial_mesh = afem::label_longest_edge(*custom.mesh);
      }
    }

    const afem::AfemResult result = afem::afem_loop(config, pde);

    std::printf("%s\n", afem::csv_header().c_str());
    for (const auto& record : result.records) {
      std::printf("%s\n", afem::csv_row(record).c_str());
    }

    if (result.records.size() >= 5) {
      const double eta_rate =
          afem::fit_rate(result.records, afem::FitX::ndof, afem::FitY::eta);
      std::printf("# eta rate vs ndof: %.3f\n", eta_rate);
      if (pde.has_exact()) {
        const double err_rate =
            afem::fit_rate(result.records, afem::FitX::ndof, afem::FitY::errH1);
        std::printf("# errH1 rate vs ndof: %.3f\n", err_rate);
      }
    }
    std::printf("# wrote %s/records.csv and mesh snapshots\n", out_dir.c_str());
    return 0;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
}
