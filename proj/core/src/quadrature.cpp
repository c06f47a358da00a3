#include "afem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "afem/error.hpp"

namespace afem {
namespace {

void check_order(int order, const char* who) {
  if (order < 1 || order > kMaxQuadOrder) {
    throw Error(std::string(who) + ": unsupported order " +
                std::to_string(order) + " (supported: 1.." +
                std::to_string(kMaxQuadOrder) + ")");
  }
}

// Legendre P_n(x) and P_n'(x) by the three-term recurrence.
void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    p = p0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

// Gauss-Legendre nodes/weights on [-1,1]; Newton from the Chebyshev guess.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre(n, z, p, dp);
      const double dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    legendre(n, z, p, dp);
    x[i] = -z;  // Chebyshev guesses descend; store ascending from the left
    x[n - 1 - i] = z;
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    w[i] = wi;
    w[n - 1 - i] = wi;
  }
  if (n % 2 == 1) {
    double p = 0.0, dp = 1.0;
    legendre(n, 0.0, p, dp);
    x[n / 2] = 0.0;
    w[n / 2] = 2.0 / (dp * dp);
  }
}

}  // namespace

QuadRule1D quadpts1(int order) {
  check_order(order, "quadpts1");
  const int ng = (order + 2) / 2;  // exact through degree 2*ng - 1 >= order

  std::vector<double> x, w;
  gauss_legendre(ng, x, w);

  QuadRule1D rule;
  rule.lambda = Table(ng, 2);
  rule.weight.resize(ng);
  for (int j = 0; j < ng; ++j) {
    const double r = 0.5 * (x[j] + 1.0);  // ascending already
    rule.lambda(j, 0) = r;
    rule.lambda(j, 1) = 1.0 - r;
    rule.weight[j] = 0.5 * w[j];
  }
  return rule;
}

namespace {

struct TriRuleBuilder {
  std::vector<std::array<double, 3>> pts;
  std::vector<double> wts;

  void center(double w) {
    pts.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    wts.push_back(w);
  }
  // The 3-point orbit of (1-2a, a, a); per-point weight w.
  void orbit3(double a, double w) {
    const double b = 1.0 - 2.0 * a;
    pts.push_back({b, a, a});
    pts.push_back({a, b, a});
    pts.push_back({a, a, b});
    wts.insert(wts.end(), 3, w);
  }
  // The 6-point orbit of (1-b-c, b, c) with distinct entries.
  void orbit6(double b, double c, double w) {
    const double a = 1.0 - b - c;
    pts.push_back({a, b, c});
    pts.push_back({a, c, b});
    pts.push_back({b, a, c});
    pts.push_back({b, c, a});
    pts.push_back({c, a, b});
    pts.push_back({c, b, a});
    wts.insert(wts.end(), 6, w);
  }

  QuadRule2D done() const {
    QuadRule2D rule;
    const int n = static_cast<int>(pts.size());
    rule.lambda = Table(n, 3);
    rule.weight = wts;
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < 3; ++c) rule.lambda(i, c) = pts[i][c];
    }
    return rule;
  }
};

}  // namespace

QuadRule2D quadpts2(int order) {
  check_order(order, "quadpts2");
  TriRuleBuilder b;
  switch (order) {
    case 1:
      b.center(1.0);
      break;
    case 2:
      // Edge midpoints.
      b.orbit3(0.5, 1.0 / 3.0);
      break;
    case 3:
      // Vertices + edge midpoints + centroid; exact rational weights.
      b.center(9.0 / 20.0);
      b.orbit3(0.0, 1.0 / 20.0);
      b.orbit3(0.5, 2.0 / 15.0);
      break;
    case 4:
      b.orbit3(0.445948490915965, 0.223381589678011);
      b.orbit3(0.091576213509771, 0.109951743655322);
      break;
    case 5: {
      const double s = std::sqrt(15.0);
      b.center(9.0 / 40.0);
      b.orbit3((6.0 + s) / 21.0, (155.0 + s) / 1200.0);
      b.orbit3((6.0 - s) / 21.0, (155.0 - s) / 1200.0);
      break;
    }
    case 6:
      b.orbit3(0.249286745170910, 0.116786275726379);
      b.orbit3(0.063089014491502, 0.050844906370207);
      b.orbit6(0.310352451033785, 0.053145049844816, 0.082851075618374);
      break;
    case 7:
    case 8:
      // Positive-weight degree-8 rule; also serves order 7 (the minimal
      // 13-point degree-7 rule has a negative centroid weight).
      b.center(0.1443156076776915);
      b.orbit3(0.4592925882926609, 0.0950916342673450);
      b.orbit3(0.1705693077516930, 0.1032173705347225);
      b.orbit3(0.0505472283170330, 0.0324584976232061);
      b.orbit6(0.2631128296348385, 0.0083947774098756, 0.0272303141744146);
      break;
    default:
      throw Error("quadpts2: unreachable");
  }
  return b.done();
}

QuadRuleBd quadptsBd(int order) {
  check_order(order, "quadptsBd");
  const QuadRule1D rule1 = quadpts1(order);
  const int ng = rule1.ng();

  QuadRuleBd rule;
  rule.lambda = Table(3 * ng, 3);
  rule.weight = rule1.weight;
  for (int j = 0; j < ng; ++j) {
    const double r = rule1.lambda(j, 0);
    const double s = rule1.lambda(j, 1);  // 1 - r
    // Side 1: (0, r_{ng+1-j}, r_j); side 2: (r_j, 0, r_{ng+1-j});
    // side 3 = 1 - side1 - side2.
    rule.lambda(j, 0) = 0.0;
    rule.lambda(j, 1) = s;
    rule.lambda(j, 2) = r;

    rule.lambda(ng + j, 0) = r;
    rule.lambda(ng + j, 1) = 0.0;
    rule.lambda(ng + j, 2) = s;

    rule.lambda(2 * ng + j, 0) = s;
    rule.lambda(2 * ng + j, 1) = r;
    rule.lambda(2 * ng + j, 2) = 0.0;
  }
  return rule;
}

int default_quad_order(int degree) {
  if (degree < 1 || degree > 3) {
    throw Error("default_quad_order: degree out of range");
  }
  return degree + 2;
}

}  // namespace afem
