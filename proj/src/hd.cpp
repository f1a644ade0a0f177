#include "hdm/hd.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace hdm {

const char* element_name(ElementKind k) {
  switch (k) {
    case ElementKind::Morley: return "morley";
    case ElementKind::Adini: return "adini";
    case ElementKind::Gr: return "gr";
  }
  return "?";
}

HessianDiscretisation::HessianDiscretisation(const Mesh& mesh, ElementKind kind)
    : mesh_(&mesh), kind_(kind) {
  const Mesh& m = mesh;
  if (kind != ElementKind::Adini && m.cell_kind != CellKind::Tri3)
    throw std::runtime_error("element requires a triangle mesh");
  if (kind == ElementKind::Adini && m.cell_kind != CellKind::Quad4)
    throw std::runtime_error("adini requires a rectangle mesh");

  std::vector<int> vertex_dof(m.n_vertices(), -1);
  int next = 0;
  if (kind == ElementKind::Adini) {
    for (int v = 0; v < m.n_vertices(); v++)
      if (!m.vertex_boundary[v]) {
        vertex_dof[v] = next;
        next += 3;
      }
  } else {
    for (int v = 0; v < m.n_vertices(); v++)
      if (!m.vertex_boundary[v]) vertex_dof[v] = next++;
  }

  cell_dofs_.resize(m.n_cells());
  switch (kind) {
    case ElementKind::Morley: {
      std::vector<int> edge_dof(m.n_edges(), -1);
      for (int e = 0; e < m.n_edges(); e++)
        if (!m.edges[e].boundary) edge_dof[e] = next++;
      morley_.reserve(m.n_cells());
      for (int c = 0; c < m.n_cells(); c++) {
        morley_.push_back(morley_local_basis(m, c));
        std::vector<int>& dofs = cell_dofs_[c];
        dofs.resize(6);
        for (int i = 0; i < 3; i++) dofs[i] = vertex_dof[m.cells[c][i]];
        for (int e = 0; e < 3; e++) dofs[3 + e] = edge_dof[m.cell_edges[c][e]];
      }
      break;
    }
    case ElementKind::Adini: {
      adini_.reserve(m.n_cells());
      for (int c = 0; c < m.n_cells(); c++) {
        adini_.push_back(adini_local_basis(m, c));
        std::vector<int>& dofs = cell_dofs_[c];
        dofs.resize(12);
        for (int i = 0; i < 4; i++) {
          const int vd = vertex_dof[m.cells[c][i]];
          for (int r = 0; r < 3; r++) dofs[3 * i + r] = vd < 0 ? -1 : vd + r;
        }
      }
      break;
    }
    case ElementKind::Gr: {
      gr_ = gr_build(m);
      for (int c = 0; c < m.n_cells(); c++) {
        const auto& dv = gr_.cells[c].dof_vertices;
        std::vector<int>& dofs = cell_dofs_[c];
        dofs.resize(dv.size());
        for (std::size_t a = 0; a < dv.size(); a++) dofs[a] = vertex_dof[dv[a]];
      }
      break;
    }
  }
  n_dofs_ = next;
}

void HessianDiscretisation::cell_quadrature(int cell, int degree,
                                            std::vector<Vec2>& points,
                                            std::vector<double>& weights,
                                            bool subdivide) const {
  const Mesh& m = *mesh_;
  if (kind_ != ElementKind::Gr || !subdivide) {
    const QuadRule& rule = rule_for(m.cell_kind, degree);
    map_rule_to_cell(m, cell, rule, points, weights);
    return;
  }
  const Vec2 p[3] = {m.cell_vertex(cell, 0), m.cell_vertex(cell, 1),
                     m.cell_vertex(cell, 2)};
  const Vec2 mid[3] = {0.5 * (p[0] + p[1]), 0.5 * (p[1] + p[2]),
                       0.5 * (p[2] + p[0])};
  const Vec2 child[4][3] = {{p[0], mid[0], mid[2]},
                            {mid[0], p[1], mid[1]},
                            {mid[2], mid[1], p[2]},
                            {mid[0], mid[1], mid[2]}};
  const QuadRule& rule = rule_for(CellKind::Tri3, degree);
  points.clear();
  weights.clear();
  points.reserve(4 * rule.points.size());
  weights.reserve(4 * rule.points.size());
  for (int ch = 0; ch < 4; ch++) {
    const Vec2 e1 = child[ch][1] - child[ch][0];
    const Vec2 e2 = child[ch][2] - child[ch][0];
    const double jac = e1.x() * e2.y() - e1.y() * e2.x();
    for (std::size_t q = 0; q < rule.points.size(); q++) {
      points.push_back(child[ch][0] + rule.points[q].x() * e1 +
                       rule.points[q].y() * e2);
      weights.push_back(rule.weights[q] * jac);
    }
  }
}

void HessianDiscretisation::refined_quadrature(int cell, int degree, int splits,
                                               std::vector<Vec2>& points,
                                               std::vector<double>& weights) const {
  const Mesh& m = *mesh_;
  points.clear();
  weights.clear();
  if (m.cell_kind == CellKind::Tri3) {
    std::vector<std::array<Vec2, 3>> tris = {
        {m.cell_vertex(cell, 0), m.cell_vertex(cell, 1), m.cell_vertex(cell, 2)}};
    for (int s = 0; s < splits; s++) {
      std::vector<std::array<Vec2, 3>> next;
      next.reserve(4 * tris.size());
      for (const auto& t : tris) {
        const Vec2 m01 = 0.5 * (t[0] + t[1]);
        const Vec2 m12 = 0.5 * (t[1] + t[2]);
        const Vec2 m20 = 0.5 * (t[2] + t[0]);
        next.push_back({t[0], m01, m20});
        next.push_back({m01, t[1], m12});
        next.push_back({m20, m12, t[2]});
        next.push_back({m01, m12, m20});
      }
      tris.swap(next);
    }
    const QuadRule& rule = rule_for(CellKind::Tri3, degree);
    points.reserve(tris.size() * rule.points.size());
    weights.reserve(tris.size() * rule.points.size());
    for (const auto& t : tris) {
      const Vec2 e1 = t[1] - t[0];
      const Vec2 e2 = t[2] - t[0];
      const double jac = e1.x() * e2.y() - e1.y() * e2.x();
      for (std::size_t q = 0; q < rule.points.size(); q++) {
        points.push_back(t[0] + rule.points[q].x() * e1 + rule.points[q].y() * e2);
        weights.push_back(rule.weights[q] * jac);
      }
    }
    return;
  }
  Vec2 lo = m.cell_vertex(cell, 0), hi = lo;
  for (int v = 1; v < 4; v++) {
    lo = lo.cwiseMin(m.cell_vertex(cell, v));
    hi = hi.cwiseMax(m.cell_vertex(cell, v));
  }
  std::vector<std::array<Vec2, 2>> boxes = {{lo, hi}};
  for (int s = 0; s < splits; s++) {
    std::vector<std::array<Vec2, 2>> next;
    next.reserve(4 * boxes.size());
    for (const auto& b : boxes) {
      const Vec2 mid = 0.5 * (b[0] + b[1]);
      next.push_back({b[0], mid});
      next.push_back({Vec2(mid.x(), b[0].y()), Vec2(b[1].x(), mid.y())});
      next.push_back({Vec2(b[0].x(), mid.y()), Vec2(mid.x(), b[1].y())});
      next.push_back({mid, b[1]});
    }
    boxes.swap(next);
  }
  const QuadRule& rule = rule_for(CellKind::Quad4, degree);
  points.reserve(boxes.size() * rule.points.size());
  weights.reserve(boxes.size() * rule.points.size());
  for (const auto& b : boxes) {
    const Vec2 ext = b[1] - b[0];
    for (std::size_t q = 0; q < rule.points.size(); q++) {
      points.push_back(b[0] + rule.points[q].cwiseProduct(ext));
      weights.push_back(rule.weights[q] * ext.x() * ext.y());
    }
  }
}

int HessianDiscretisation::form_degree() const {
  switch (kind_) {
    case ElementKind::Morley: return 6;
    case ElementKind::Adini: return 10;
    case ElementKind::Gr: return 6;
  }
  return 6;
}

void HessianDiscretisation::tabulate(int cell, const std::vector<Vec2>& points,
                                     LocalTable& table) const {
  const int npts = static_cast<int>(points.size());
  switch (kind_) {
    case ElementKind::Morley: {
      table.nloc = 6;
      table.pi.resize(6 * npts);
      table.grad.resize(6 * npts);
      table.hess.resize(6 * npts);
      const MorleyLocal& loc = morley_[cell];
      for (int q = 0; q < npts; q++)
        loc.eval(points[q], &table.pi[6 * q], &table.grad[6 * q],
                 &table.hess[6 * q]);
      break;
    }
    case ElementKind::Adini: {
      table.nloc = 12;
      table.pi.resize(12 * npts);
      table.grad.resize(12 * npts);
      table.hess.resize(12 * npts);
      const AdiniLocal& loc = adini_[cell];
      for (int q = 0; q < npts; q++)
        loc.eval(points[q], &table.pi[12 * q], &table.grad[12 * q],
                 &table.hess[12 * q]);
      break;
    }
    case ElementKind::Gr: {
      const GrMethod::CellData& cd = gr_.cells[cell];
      const int nloc = static_cast<int>(cd.dof_vertices.size());
      table.nloc = nloc;
      table.pi.assign(nloc * npts, 0.);
      table.grad.resize(nloc * npts);
      table.hess.resize(nloc * npts);
      for (int q = 0; q < npts; q++) {
        const auto lam = gr_.barycentric(cell, points[q]);
        const Vec2 s = gr_.stabilisation(cell, points[q]);
        for (int a = 0; a < nloc; a++) {
          const int idx = q * nloc + a;
          if (cd.local_vertex[a] >= 0) table.pi[idx] = lam[cd.local_vertex[a]];
          Vec2 qg = Vec2::Zero();
          for (int lj = 0; lj < 3; lj++) qg += lam[lj] * cd.qh_nodal[a][lj];
          table.grad[idx] = qg;
          table.hess[idx] =
              cd.grad_qh[a] + s * (qg - cd.grad_in_cell[a]).transpose();
        }
      }
      break;
    }
  }
}

HessianDiscretisation build_hd(const Mesh& mesh, ElementKind kind) {
  return HessianDiscretisation(mesh, kind);
}

DiscreteField zero_field(const HessianDiscretisation& hd, int k) {
  DiscreteField f;
  f.k = k;
  f.coeffs = Eigen::MatrixXd::Zero(hd.n_dofs(), k);
  return f;
}

DiscreteField interpolate(const HessianDiscretisation& hd, const ExactBundle& u) {
  const Mesh& m = hd.mesh();
  DiscreteField f = zero_field(hd, static_cast<int>(u.size()));
  for (int comp = 0; comp < f.k; comp++) {
    const ExactComponent& uc = u[comp];
    for (int c = 0; c < hd.n_cells(); c++) {
      const std::vector<int>& dofs = hd.cell_dofs(c);
      switch (hd.kind()) {
        case ElementKind::Morley:
          for (int i = 0; i < 3; i++)
            if (dofs[i] >= 0)
              f.coeffs(dofs[i], comp) = uc.value(m.cell_vertex(c, i));
          for (int e = 0; e < 3; e++)
            if (dofs[3 + e] >= 0) {
              const Edge& ed = m.edges[m.cell_edges[c][e]];
              f.coeffs(dofs[3 + e], comp) = ed.normal.dot(uc.grad(ed.midpoint));
            }
          break;
        case ElementKind::Adini:
          for (int i = 0; i < 4; i++) {
            if (dofs[3 * i] < 0) continue;
            const Vec2 p = m.cell_vertex(c, i);
            const Vec2 g = uc.grad(p);
            f.coeffs(dofs[3 * i], comp) = uc.value(p);
            f.coeffs(dofs[3 * i + 1], comp) = g.x();
            f.coeffs(dofs[3 * i + 2], comp) = g.y();
          }
          break;
        case ElementKind::Gr: {
          const auto& dv = hd.gr().cells[c].dof_vertices;
          for (std::size_t a = 0; a < dv.size(); a++)
            if (dofs[a] >= 0) f.coeffs(dofs[a], comp) = uc.value(m.vertex(dv[a]));
          break;
        }
      }
    }
  }
  return f;
}

void reconstruct(const HessianDiscretisation& hd, const DiscreteField& field,
                 int cell, const std::vector<Vec2>& points,
                 std::vector<FieldValues>& values) {
  LocalTable tab;
  hd.tabulate(cell, points, tab);
  const std::vector<int>& dofs = hd.cell_dofs(cell);
  const int npts = static_cast<int>(points.size());
  values.assign(npts * field.k, FieldValues{});
  for (int q = 0; q < npts; q++)
    for (int j = 0; j < tab.nloc; j++) {
      if (dofs[j] < 0) continue;
      const int idx = q * tab.nloc + j;
      for (int c = 0; c < field.k; c++) {
        const double w = field.coeffs(dofs[j], c);
        FieldValues& fv = values[q * field.k + c];
        fv.pi += w * tab.pi[idx];
        fv.grad += w * tab.grad[idx];
        fv.hess += w * tab.hess[idx];
      }
    }
}

double hd_norm(const HessianDiscretisation& hd, const DiscreteField& field) {
  double acc = 0.;
  std::vector<Vec2> pts;
  std::vector<double> wts;
  std::vector<FieldValues> vals;
  for (int c = 0; c < hd.n_cells(); c++) {
    hd.cell_quadrature(c, hd.form_degree(), pts, wts);
    reconstruct(hd, field, c, pts, vals);
    for (std::size_t q = 0; q < pts.size(); q++)
      for (int comp = 0; comp < field.k; comp++)
        acc += wts[q] * vals[q * field.k + comp].hess.squaredNorm();
  }
  return std::sqrt(acc);
}

}  // namespace hdm
