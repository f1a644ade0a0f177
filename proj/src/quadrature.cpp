#include "hdm/quadrature.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace hdm {

namespace {

#include "triangle_rules.inc"

// Gauss-Legendre nodes on [0,1] by Newton iteration on P_n; standard Chebyshev
// initial guesses converge in a handful of steps to machine precision.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; i++) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p0, p1;
    for (int it = 0; it < 100; it++) {
      p0 = 1.;
      p1 = t;
      for (int k = 2; k <= n; k++) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    p0 = 1.;
    p1 = t;
    for (int k = 2; k <= n; k++) {
      const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (t * p1 - p0) / (t * t - 1.);
    x[i] = 0.5 * (1. - t);  // map [-1,1] -> [0,1], reversed order is harmless
    w[i] = 1. / ((1. - t * t) * dp * dp);
  }
}

QuadRule make_tri_rule(int degree) {
  for (const TriRuleEntry& e : tri_rules) {
    if (e.degree >= degree) {
      QuadRule r;
      r.exact_degree = e.degree;
      r.points.reserve(e.npts);
      r.weights.reserve(e.npts);
      for (int i = 0; i < e.npts; i++) {
        r.points.emplace_back(e.data[i][0], e.data[i][1]);
        r.weights.push_back(e.data[i][2]);
      }
      return r;
    }
  }
  throw std::runtime_error("triangle quadrature degree > 14 not available");
}

QuadRule make_quad_rule(int degree) {
  if (degree > 17) throw std::runtime_error("rectangle quadrature degree > 17 not available");
  const int n = degree / 2 + 1;  // 1D Gauss with n points is exact to 2n-1
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  QuadRule r;
  r.exact_degree = 2 * n - 1;
  for (int j = 0; j < n; j++)
    for (int i = 0; i < n; i++) {
      r.points.emplace_back(x[i], x[j]);
      r.weights.push_back(w[i] * w[j]);
    }
  return r;
}

}  // namespace

const QuadRule& rule_for(CellKind kind, int degree) {
  static std::map<std::pair<int, int>, QuadRule> cache;
  auto key = std::make_pair(static_cast<int>(kind), degree);
  auto it = cache.find(key);
  if (it == cache.end()) {
    QuadRule r = (kind == CellKind::Tri3) ? make_tri_rule(degree)
                                          : make_quad_rule(degree);
    it = cache.emplace(key, std::move(r)).first;
  }
  return it->second;
}

void map_rule_to_cell(const Mesh& m, int cell, const QuadRule& rule,
                      std::vector<Vec2>& pts, std::vector<double>& wts) {
  const std::size_t nq = rule.points.size();
  pts.resize(nq);
  wts.resize(nq);
  if (m.cell_nv(cell) == 3) {
    const Vec2& a = m.cell_vertex(cell, 0);
    const Vec2 e1 = m.cell_vertex(cell, 1) - a;
    const Vec2 e2 = m.cell_vertex(cell, 2) - a;
    const double jac = 2. * m.cell_area(cell);  // reference measure 1/2
    for (std::size_t q = 0; q < nq; q++) {
      pts[q] = a + rule.points[q].x() * e1 + rule.points[q].y() * e2;
      wts[q] = rule.weights[q] * jac;
    }
  } else {
    const Vec2& a = m.cell_vertex(cell, 0);
    const Vec2 e1 = m.cell_vertex(cell, 1) - a;
    const Vec2 e2 = m.cell_vertex(cell, 3) - a;
    const double jac = m.cell_area(cell);
    for (std::size_t q = 0; q < nq; q++) {
      pts[q] = a + rule.points[q].x() * e1 + rule.points[q].y() * e2;
      wts[q] = rule.weights[q] * jac;
    }
  }
}

double integrate_on_cell(const Mesh& m, int cell,
                         const std::function<double(const Vec2&)>& f,
                         int degree) {
  const QuadRule& rule = rule_for(m.cell_kind, degree);
  std::vector<Vec2> pts;
  std::vector<double> wts;
  map_rule_to_cell(m, cell, rule, pts, wts);
  double s = 0.;
  for (std::size_t q = 0; q < pts.size(); q++) s += wts[q] * f(pts[q]);
  return s;
}

double integrate(const Mesh& m, const std::function<double(const Vec2&)>& f,
                 int degree) {
  double s = 0.;
  for (int c = 0; c < m.n_cells(); c++) s += integrate_on_cell(m, c, f, degree);
  return s;
}

}  // namespace hdm
