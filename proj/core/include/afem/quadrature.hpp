#pragma once

#include <vector>

#include "afem/table.hpp"

namespace afem {

inline constexpr int kMaxQuadOrder = 8;

// Gauss-Legendre rule on [0,1] in barycentric form. Row j of lambda is
// (r_j, 1 - r_j) with r_1 < r_2 < ... < r_ng; weights sum to 1.
struct QuadRule1D {
  Table lambda;                // ng x 2
  std::vector<double> weight;  // ng
  int ng() const { return static_cast<int>(weight.size()); }
};

// Symmetric rule on the reference triangle, weights normalized to unit
// measure (scale by |K| when integrating over a physical element). Rows of
// lambda are barycentric coordinates summing to 1.
struct QuadRule2D {
  Table lambda;                // npts x 3
  std::vector<double> weight;  // npts
  int npts() const { return static_cast<int>(weight.size()); }
};

// The 1D rule laid out along the three sides of the reference triangle:
// rows [0,ng) traverse side 1 (lambda_1 = 0), rows [ng,2ng) side 2
// (lambda_2 = 0), rows [2ng,3ng) side 3 (lambda_3 = 0). The ng weights are
// shared by the three side blocks.
struct QuadRuleBd {
  Table lambda;                // 3ng x 3
  std::vector<double> weight;  // ng
  int ng() const { return static_cast<int>(weight.size()); }
};

// All rules accept 1 <= order <= kMaxQuadOrder and are exact for
// polynomials of total degree <= order; all weights are positive.
QuadRule1D quadpts1(int order);
QuadRule2D quadpts2(int order);
QuadRuleBd quadptsBd(int order);

// Default integration order for a P_k discretization: k + 2.
int default_quad_order(int degree);

}  // namespace afem
