#include "hdm/elements.hpp"

#include <algorithm>
#include <cmath>

#include "hdm/quadrature.hpp"

namespace hdm {

// ---------------------------------------------------------------- Morley ----

void MorleyLocal::eval(const Vec2& x, double* val, Vec2* grad, Mat2* hess) const {
  const double xi = (x.x() - origin.x()) / scale;
  const double eta = (x.y() - origin.y()) / scale;
  const double s1 = 1. / scale, s2 = s1 * s1;
  // Monomials 1, xi, eta, xi^2, xi*eta, eta^2 and their derivatives.
  const double m[6] = {1., xi, eta, xi * xi, xi * eta, eta * eta};
  const double mx[6] = {0., 1., 0., 2. * xi, eta, 0.};
  const double my[6] = {0., 0., 1., 0., xi, 2. * eta};
  static const double mxx[6] = {0., 0., 0., 2., 0., 0.};
  static const double mxy[6] = {0., 0., 0., 0., 1., 0.};
  static const double myy[6] = {0., 0., 0., 0., 0., 2.};
  for (int j = 0; j < 6; j++) {
    double v = 0., gx = 0., gy = 0., hxx = 0., hxy = 0., hyy = 0.;
    for (int k = 0; k < 6; k++) {
      const double c = coeff(k, j);
      v += c * m[k];
      gx += c * mx[k];
      gy += c * my[k];
      hxx += c * mxx[k];
      hxy += c * mxy[k];
      hyy += c * myy[k];
    }
    if (val) val[j] = v;
    if (grad) grad[j] = Vec2(gx * s1, gy * s1);
    if (hess) {
      hess[j](0, 0) = hxx * s2;
      hess[j](0, 1) = hxy * s2;
      hess[j](1, 0) = hxy * s2;
      hess[j](1, 1) = hyy * s2;
    }
  }
}

MorleyLocal morley_local_basis(const Mesh& m, int cell) {
  MorleyLocal loc;
  loc.origin = m.cell_centroid(cell);
  loc.scale = m.cell_diameter(cell);
  const double s1 = 1. / loc.scale;

  Eigen::Matrix<double, 6, 6> V;
  auto monomials = [&](const Vec2& p, double* out) {
    const double xi = (p.x() - loc.origin.x()) * s1;
    const double eta = (p.y() - loc.origin.y()) * s1;
    out[0] = 1.;
    out[1] = xi;
    out[2] = eta;
    out[3] = xi * xi;
    out[4] = xi * eta;
    out[5] = eta * eta;
  };
  for (int i = 0; i < 3; i++) {
    double row[6];
    monomials(m.cell_vertex(cell, i), row);
    for (int k = 0; k < 6; k++) V(i, k) = row[k];
  }
  for (int le = 0; le < 3; le++) {
    const Edge& e = m.edges[m.cell_edges[cell][le]];
    const double xi = (e.midpoint.x() - loc.origin.x()) * s1;
    const double eta = (e.midpoint.y() - loc.origin.y()) * s1;
    const double nx = e.normal.x(), ny = e.normal.y();
    // n . grad of the monomials, in physical units.
    V(3 + le, 0) = 0.;
    V(3 + le, 1) = nx * s1;
    V(3 + le, 2) = ny * s1;
    V(3 + le, 3) = 2. * xi * nx * s1;
    V(3 + le, 4) = (eta * nx + xi * ny) * s1;
    V(3 + le, 5) = 2. * eta * ny * s1;
  }
  loc.coeff = V.inverse();
  return loc;
}

// ----------------------------------------------------------------- Adini ----

namespace {

// Monomial exponents of the Adini space: P3 plus x^3 y and x y^3.
constexpr int adini_px[12] = {0, 1, 0, 2, 1, 0, 3, 2, 1, 0, 3, 1};
constexpr int adini_py[12] = {0, 0, 1, 0, 1, 2, 0, 1, 2, 3, 1, 3};

inline double ipow(double x, int p) {
  double r = 1.;
  for (int i = 0; i < p; i++) r *= x;
  return r;
}

}  // namespace

void AdiniLocal::eval(const Vec2& x, double* val, Vec2* grad, Mat2* hess) const {
  const double xi = (x.x() - centre.x()) / sx;
  const double eta = (x.y() - centre.y()) / sy;
  double m[12], mx[12], my[12], mxx[12], mxy[12], myy[12];
  for (int k = 0; k < 12; k++) {
    const int a = adini_px[k], b = adini_py[k];
    m[k] = ipow(xi, a) * ipow(eta, b);
    mx[k] = a ? a * ipow(xi, a - 1) * ipow(eta, b) : 0.;
    my[k] = b ? b * ipow(xi, a) * ipow(eta, b - 1) : 0.;
    mxx[k] = a > 1 ? a * (a - 1) * ipow(xi, a - 2) * ipow(eta, b) : 0.;
    myy[k] = b > 1 ? b * (b - 1) * ipow(xi, a) * ipow(eta, b - 2) : 0.;
    mxy[k] = (a && b) ? a * b * ipow(xi, a - 1) * ipow(eta, b - 1) : 0.;
  }
  const double cx = 1. / sx, cy = 1. / sy;
  for (int j = 0; j < 12; j++) {
    double v = 0., gx = 0., gy = 0., hxx = 0., hxy = 0., hyy = 0.;
    for (int k = 0; k < 12; k++) {
      const double c = coeff(k, j);
      v += c * m[k];
      gx += c * mx[k];
      gy += c * my[k];
      hxx += c * mxx[k];
      hxy += c * mxy[k];
      hyy += c * myy[k];
    }
    if (val) val[j] = v;
    if (grad) grad[j] = Vec2(gx * cx, gy * cy);
    if (hess) {
      hess[j](0, 0) = hxx * cx * cx;
      hess[j](0, 1) = hxy * cx * cy;
      hess[j](1, 0) = hxy * cx * cy;
      hess[j](1, 1) = hyy * cy * cy;
    }
  }
}

AdiniLocal adini_local_basis(const Mesh& m, int cell) {
  AdiniLocal loc;
  const Vec2& p0 = m.cell_vertex(cell, 0);
  const Vec2& p2 = m.cell_vertex(cell, 2);
  loc.centre = 0.5 * (p0 + p2);
  loc.sx = 0.5 * std::abs(p2.x() - p0.x());
  loc.sy = 0.5 * std::abs(p2.y() - p0.y());

  Eigen::Matrix<double, 12, 12> V;
  for (int i = 0; i < 4; i++) {
    const Vec2& p = m.cell_vertex(cell, i);
    const double xi = (p.x() - loc.centre.x()) / loc.sx;
    const double eta = (p.y() - loc.centre.y()) / loc.sy;
    for (int k = 0; k < 12; k++) {
      const int a = adini_px[k], b = adini_py[k];
      V(3 * i, k) = ipow(xi, a) * ipow(eta, b);
      V(3 * i + 1, k) =
          (a ? a * ipow(xi, a - 1) * ipow(eta, b) : 0.) / loc.sx;
      V(3 * i + 2, k) =
          (b ? b * ipow(xi, a) * ipow(eta, b - 1) : 0.) / loc.sy;
    }
  }
  loc.coeff = V.inverse();
  return loc;
}

// -------------------------------------------------------------------- GR ----

namespace {

std::array<Vec2, 3> hat_gradients(const Mesh& m, int cell) {
  const Vec2& p0 = m.cell_vertex(cell, 0);
  const Vec2& p1 = m.cell_vertex(cell, 1);
  const Vec2& p2 = m.cell_vertex(cell, 2);
  const double inv2A = 0.5 / m.cell_area(cell);
  auto perp = [](const Vec2& v) { return Vec2(-v.y(), v.x()); };
  return {perp(p2 - p1) * inv2A, perp(p0 - p2) * inv2A, perp(p1 - p0) * inv2A};
}

}  // namespace

std::array<double, 3> GrMethod::barycentric(int cell, const Vec2& x) const {
  const CellData& cd = cells[cell];
  const Vec2 d = x - mesh->cell_vertex(cell, 0);
  const double l1 = cd.hat_grad[1].dot(d);
  const double l2 = cd.hat_grad[2].dot(d);
  return {1. - l1 - l2, l1, l2};
}

int GrMethod::child_of(int cell, const Vec2& x) const {
  const auto l = barycentric(cell, x);
  for (int i = 0; i < 3; i++)
    if (l[i] >= 0.5) return i;
  return 3;
}

Vec2 GrMethod::stabilisation(int cell, const Vec2& x) const {
  return (child_of(cell, x) == 3 ? s_medial : s_corner) * s_dir;
}

GrMethod gr_build(const Mesh& m) {
  GrMethod gr;
  gr.mesh = &m;
  gr.s_dir = Vec2(1., 1.) / std::sqrt(2.);

  gr.vertex_cells.assign(m.n_vertices(), {});
  for (int c = 0; c < m.n_cells(); c++)
    for (int i = 0; i < 3; i++) gr.vertex_cells[m.cells[c][i]].push_back(c);
  gr.patch_area.assign(m.n_vertices(), 0.);
  for (int v = 0; v < m.n_vertices(); v++)
    for (int c : gr.vertex_cells[v]) gr.patch_area[v] += m.cell_area(c);

  gr.cells.resize(m.n_cells());
  for (int c = 0; c < m.n_cells(); c++) {
    GrMethod::CellData& cd = gr.cells[c];
    cd.hat_grad = hat_gradients(m, c);

    // Interior vertices reachable through the patches of this cell's vertices.
    std::vector<int> dofs;
    for (int lv = 0; lv < 3; lv++)
      for (int c2 : gr.vertex_cells[m.cells[c][lv]])
        for (int i = 0; i < 3; i++) {
          const int v = m.cells[c2][i];
          if (!m.vertex_boundary[v]) dofs.push_back(v);
        }
    std::sort(dofs.begin(), dofs.end());
    dofs.erase(std::unique(dofs.begin(), dofs.end()), dofs.end());
    cd.dof_vertices = std::move(dofs);

    const int nloc = static_cast<int>(cd.dof_vertices.size());
    cd.local_vertex.assign(nloc, -1);
    cd.qh_nodal.assign(nloc, {Vec2::Zero(), Vec2::Zero(), Vec2::Zero()});
    cd.grad_in_cell.assign(nloc, Vec2::Zero());
    cd.grad_qh.assign(nloc, Mat2::Zero());

    for (int a = 0; a < nloc; a++) {
      const int vi = cd.dof_vertices[a];
      for (int lv = 0; lv < 3; lv++)
        if (m.cells[c][lv] == vi) {
          cd.local_vertex[a] = lv;
          cd.grad_in_cell[a] = cd.hat_grad[lv];
        }
      // Q_h grad(hat_vi) nodal value at each cell vertex j: area-weighted
      // average of the piecewise-constant gradient over the patch of j.
      for (int lj = 0; lj < 3; lj++) {
        const int vj = m.cells[c][lj];
        if (m.vertex_boundary[vj]) continue;
        Vec2 acc = Vec2::Zero();
        for (int c2 : gr.vertex_cells[vj]) {
          for (int i = 0; i < 3; i++)
            if (m.cells[c2][i] == vi) {
              acc += m.cell_area(c2) * hat_gradients(m, c2)[i];
              break;
            }
        }
        cd.qh_nodal[a][lj] = acc / gr.patch_area[vj];
      }
      Mat2 g = Mat2::Zero();
      for (int lj = 0; lj < 3; lj++)
        g += cd.qh_nodal[a][lj] * cd.hat_grad[lj].transpose();
      cd.grad_qh[a] = g;
    }
  }
  return gr;
}

double gr_p5_residual(const GrMethod& gr, int cell) {
  const Mesh& m = *gr.mesh;
  const Vec2 p[3] = {m.cell_vertex(cell, 0), m.cell_vertex(cell, 1),
                     m.cell_vertex(cell, 2)};
  const Vec2 mid[3] = {0.5 * (p[0] + p[1]), 0.5 * (p[1] + p[2]),
                       0.5 * (p[2] + p[0])};
  const Vec2 child[4][3] = {{p[0], mid[0], mid[2]},
                            {mid[0], p[1], mid[1]},
                            {mid[2], mid[1], p[2]},
                            {mid[0], mid[1], mid[2]}};
  const Vec2 origin = m.cell_centroid(cell);
  const double scale = m.cell_diameter(cell);
  const QuadRule& rule = rule_for(CellKind::Tri3, 2);
  double m0 = 0., m1 = 0., m2 = 0.;
  for (int ch = 0; ch < 4; ch++) {
    const double s = (ch == 3) ? gr.s_medial : gr.s_corner;
    const Vec2 e1 = child[ch][1] - child[ch][0];
    const Vec2 e2 = child[ch][2] - child[ch][0];
    const double jac = e1.x() * e2.y() - e1.y() * e2.x();
    for (std::size_t q = 0; q < rule.points.size(); q++) {
      const Vec2 x = child[ch][0] + rule.points[q].x() * e1 + rule.points[q].y() * e2;
      const double w = rule.weights[q] * jac * s;
      m0 += w;
      m1 += w * (x.x() - origin.x()) / scale;
      m2 += w * (x.y() - origin.y()) / scale;
    }
  }
  const double area = m.cell_area(cell);
  return std::max({std::abs(m0), std::abs(m1), std::abs(m2)}) / area;
}

Eigen::VectorXd qh_project(const GrMethod& gr,
                           const std::function<double(const Vec2&)>& g,
                           int degree) {
  const Mesh& m = *gr.mesh;
  Eigen::VectorXd nodal = Eigen::VectorXd::Zero(m.n_vertices());
  for (int v = 0; v < m.n_vertices(); v++) {
    if (m.vertex_boundary[v]) continue;
    double acc = 0.;
    for (int c : gr.vertex_cells[v]) {
      int lv = 0;
      while (m.cells[c][lv] != v) lv++;
      const auto hg = hat_gradients(m, c);
      const Vec2 p0 = m.cell_vertex(c, 0);
      acc += integrate_on_cell(
          m, c,
          [&](const Vec2& x) {
            const double lam = (lv == 0 ? 1. : 0.) + hg[lv].dot(x - p0);
            return (4. * lam - 1.) * g(x);
          },
          degree);
    }
    nodal[v] = 3. * acc / gr.patch_area[v];
  }
  return nodal;
}

std::vector<GrPropertyRow> gr_property_report(const std::vector<Mesh>& meshes,
                                              const ExactComponent& u) {
  std::vector<GrPropertyRow> rows;
  for (const Mesh& m : meshes) {
    GrMethod gr = gr_build(m);
    GrPropertyRow row;
    row.h = m.h;

    // Nodal interpolant of u (zero at boundary vertices).
    Eigen::VectorXd iu = Eigen::VectorXd::Zero(m.n_vertices());
    for (int v = 0; v < m.n_vertices(); v++)
      if (!m.vertex_boundary[v]) iu[v] = u.value(m.vertex(v));

    // Broken gradient of I_h u and its Q_h projection (area averages).
    std::vector<Vec2> gIu(m.n_cells());
    for (int c = 0; c < m.n_cells(); c++) {
      const auto hg = gr.cells[c].hat_grad;
      Vec2 g = Vec2::Zero();
      for (int lv = 0; lv < 3; lv++) g += iu[m.cells[c][lv]] * hg[lv];
      gIu[c] = g;
    }
    Eigen::MatrixX2d qg = Eigen::MatrixX2d::Zero(m.n_vertices(), 2);
    for (int v = 0; v < m.n_vertices(); v++) {
      if (m.vertex_boundary[v]) continue;
      Vec2 acc = Vec2::Zero();
      for (int c : gr.vertex_cells[v]) acc += m.cell_area(c) * gIu[c];
      qg.row(v) = acc / gr.patch_area[v];
    }

    double e0 = 0., e2 = 0.;
    for (int c = 0; c < m.n_cells(); c++) {
      const Vec2 p0 = m.cell_vertex(c, 0);
      const auto hg = gr.cells[c].hat_grad;
      e0 += integrate_on_cell(
          m, c, [&](const Vec2& x) { return (gIu[c] - u.grad(x)).squaredNorm(); },
          8);
      e2 += integrate_on_cell(
          m, c,
          [&](const Vec2& x) {
            const double l1 = hg[1].dot(x - p0), l2 = hg[2].dot(x - p0);
            const double l0 = 1. - l1 - l2;
            const Vec2 v = l0 * qg.row(m.cells[c][0]).transpose() +
                           l1 * qg.row(m.cells[c][1]).transpose() +
                           l2 * qg.row(m.cells[c][2]).transpose();
            return (v - u.grad(x)).squaredNorm();
          },
          8);
    }
    row.p0_grad_interp = std::sqrt(e0);
    row.p2_recovery = std::sqrt(e2);

    // P1: projector L2 stability on a generic smooth function.
    auto g1 = [](const Vec2& x) {
      return std::sin(2.5 * x.x() + 0.7) * std::cos(1.3 * x.y());
    };
    Eigen::VectorXd qs = qh_project(gr, g1, 8);
    double nq = 0., ng = 0., e3 = 0.;
    Eigen::VectorXd qw = qh_project(gr, u.value, 8);
    for (int c = 0; c < m.n_cells(); c++) {
      const Vec2 p0 = m.cell_vertex(c, 0);
      const auto hg = gr.cells[c].hat_grad;
      auto p1val = [&](const Eigen::VectorXd& nodalv, const Vec2& x) {
        const double l1 = hg[1].dot(x - p0), l2 = hg[2].dot(x - p0);
        return (1. - l1 - l2) * nodalv[m.cells[c][0]] + l1 * nodalv[m.cells[c][1]] +
               l2 * nodalv[m.cells[c][2]];
      };
      nq += integrate_on_cell(
          m, c, [&](const Vec2& x) { return p1val(qs, x) * p1val(qs, x); }, 8);
      ng += integrate_on_cell(m, c, [&](const Vec2& x) { return g1(x) * g1(x); }, 8);
      Vec2 gq = Vec2::Zero();
      for (int lv = 0; lv < 3; lv++) gq += qw[m.cells[c][lv]] * hg[lv];
      e3 += integrate_on_cell(
          m, c, [&](const Vec2& x) { return (gq - u.grad(x)).squaredNorm(); }, 8);
    }
    row.p1_stability = std::sqrt(nq / ng);
    row.p3_consistency = std::sqrt(e3);

    double p5 = 0.;
    for (int c = 0; c < m.n_cells(); c++)
      p5 = std::max(p5, gr_p5_residual(gr, c));
    row.p5_max_residual = p5;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hdm
