#include "hdm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <utility>

namespace hdm {

double Mesh::cell_diameter(int c) const {
  const int nv = cell_nv(c);
  double d = 0.;
  for (int i = 0; i < nv; i++)
    for (int j = i + 1; j < nv; j++)
      d = std::max(d, (cell_vertex(c, i) - cell_vertex(c, j)).norm());
  return d;
}

Vec2 Mesh::cell_centroid(int c) const {
  const int nv = cell_nv(c);
  Vec2 g = Vec2::Zero();
  for (int i = 0; i < nv; i++) g += cell_vertex(c, i);
  return g / nv;
}

static double signed_area(const Mesh& m, int c) {
  const int nv = m.cell_nv(c);
  double a = 0.;
  for (int i = 0; i < nv; i++) {
    const Vec2& p = m.cell_vertex(c, i);
    const Vec2& q = m.cell_vertex(c, (i + 1) % nv);
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

Mesh assemble_mesh(CellKind kind, std::vector<Vec2> vertices,
                   std::vector<std::array<int, 4>> cells) {
  Mesh m;
  m.cell_kind = kind;
  m.vertices = std::move(vertices);
  m.cells = std::move(cells);

  m.areas.resize(m.n_cells());
  for (int c = 0; c < m.n_cells(); c++) m.areas[c] = signed_area(m, c);

  // Edge table keyed by sorted endpoints; incident cells in encounter order.
  std::map<std::pair<int, int>, int> edge_id;
  m.cell_edges.assign(m.n_cells(), {{-1, -1, -1, -1}});
  for (int c = 0; c < m.n_cells(); c++) {
    const int nv = m.cell_nv(c);
    for (int le = 0; le < nv; le++) {
      // Triangles store edge le opposite vertex le; quads side by side.
      int a, b;
      if (nv == 3) {
        a = m.cells[c][(le + 1) % 3];
        b = m.cells[c][(le + 2) % 3];
      } else {
        a = m.cells[c][le];
        b = m.cells[c][(le + 1) % 4];
      }
      auto key = std::minmax(a, b);
      auto [it, inserted] = edge_id.try_emplace(key, m.n_edges());
      if (inserted) {
        Edge e;
        e.v = {key.first, key.second};
        e.midpoint = 0.5 * (m.vertices[a] + m.vertices[b]);
        e.length = (m.vertices[a] - m.vertices[b]).norm();
        m.edges.push_back(e);
      }
      Edge& e = m.edges[it->second];
      if (e.n_incident < 2) e.cells[e.n_incident] = c;
      e.n_incident++;
      m.cell_edges[c][le] = it->second;
    }
  }

  m.vertex_boundary.assign(m.n_vertices(), false);
  for (Edge& e : m.edges) {
    e.boundary = (e.n_incident == 1);
    if (e.boundary) {
      m.vertex_boundary[e.v[0]] = true;
      m.vertex_boundary[e.v[1]] = true;
    }
    // Normal out of the lower-index incident cell.
    const int c0 = e.cells[0];
    if (c0 >= 0) {
      Vec2 t = m.vertices[e.v[1]] - m.vertices[e.v[0]];
      Vec2 n(t.y(), -t.x());
      n.normalize();
      if (n.dot(e.midpoint - m.cell_centroid(c0)) < 0.) n = -n;
      e.normal = n;
    }
  }

  m.h = 0.;
  for (int c = 0; c < m.n_cells(); c++) m.h = std::max(m.h, m.cell_diameter(c));
  return m;
}

namespace {

// Grid-square predicate for the supported domains; (i,j) counts squares from
// the lower-left corner of the bounding box.
bool square_in_domain(DomainKind domain, int n, int i, int j) {
  if (domain == DomainKind::UnitSquare) return i >= 0 && i < n && j >= 0 && j < n;
  // L-shape: bounding box (-1,1)^2 is 2n x 2n squares; drop the quadrant
  // [0,1) x (-1,0].
  if (i < 0 || i >= 2 * n || j < 0 || j >= 2 * n) return false;
  return !(i >= n && j < n);
}

struct GridIndexer {
  DomainKind domain;
  int n;
  int cols;  // vertices per row
  double x0, y0, dx;
  std::map<std::pair<int, int>, int> centre_ids;
  std::vector<int> vertex_ids;  // grid (i,j) -> compact id or -1
  std::vector<Vec2> verts;

  GridIndexer(DomainKind d, int n_) : domain(d), n(n_) {
    const int span = (d == DomainKind::UnitSquare) ? n : 2 * n;
    cols = span + 1;
    x0 = (d == DomainKind::UnitSquare) ? 0. : -1.;
    y0 = x0;
    dx = 1.0 / n;
    vertex_ids.assign(cols * cols, -1);
    for (int j = 0; j <= span; j++)
      for (int i = 0; i <= span; i++) {
        // Keep a grid vertex iff it touches a kept square.
        bool used = false;
        for (int sj = j - 1; sj <= j && !used; sj++)
          for (int si = i - 1; si <= i && !used; si++)
            used = square_in_domain(d, n, si, sj);
        if (used) {
          vertex_ids[j * cols + i] = static_cast<int>(verts.size());
          verts.emplace_back(x0 + i * dx, y0 + j * dx);
        }
      }
  }

  int grid(int i, int j) const { return vertex_ids[j * cols + i]; }

  int centre(int i, int j) {
    auto [it, inserted] = centre_ids.try_emplace({i, j}, -1);
    if (inserted) {
      it->second = static_cast<int>(verts.size());
      verts.emplace_back(x0 + (i + 0.5) * dx, y0 + (j + 0.5) * dx);
    }
    return it->second;
  }
};

}  // namespace

Mesh build_structured_mesh(DomainKind domain, MeshPattern pattern, int n) {
  GridIndexer g(domain, n);
  const int span = (domain == DomainKind::UnitSquare) ? n : 2 * n;
  std::vector<std::array<int, 4>> cells;
  for (int j = 0; j < span; j++)
    for (int i = 0; i < span; i++) {
      if (!square_in_domain(domain, n, i, j)) continue;
      const int bl = g.grid(i, j), br = g.grid(i + 1, j);
      const int tr = g.grid(i + 1, j + 1), tl = g.grid(i, j + 1);
      switch (pattern) {
        case MeshPattern::Diagonal:
          cells.push_back({bl, br, tr, -1});
          cells.push_back({bl, tr, tl, -1});
          break;
        case MeshPattern::CrissCross: {
          const int c = g.centre(i, j);
          cells.push_back({bl, br, c, -1});
          cells.push_back({br, tr, c, -1});
          cells.push_back({tr, tl, c, -1});
          cells.push_back({tl, bl, c, -1});
          break;
        }
        case MeshPattern::Rectangles:
          cells.push_back({bl, br, tr, tl});
          break;
      }
    }
  const CellKind kind =
      (pattern == MeshPattern::Rectangles) ? CellKind::Quad4 : CellKind::Tri3;
  return assemble_mesh(kind, std::move(g.verts), std::move(cells));
}

Mesh red_refine(const Mesh& m) {
  std::vector<Vec2> verts = m.vertices;
  std::vector<int> edge_mid(m.n_edges());
  for (int e = 0; e < m.n_edges(); e++) {
    edge_mid[e] = static_cast<int>(verts.size());
    verts.push_back(m.edges[e].midpoint);
  }
  std::vector<std::array<int, 4>> cells;
  cells.reserve(4 * m.n_cells());
  for (int c = 0; c < m.n_cells(); c++) {
    if (m.cell_nv(c) == 3) {
      const int v0 = m.cells[c][0], v1 = m.cells[c][1], v2 = m.cells[c][2];
      // cell_edges[le] is opposite vertex le.
      const int m12 = edge_mid[m.cell_edges[c][0]];
      const int m20 = edge_mid[m.cell_edges[c][1]];
      const int m01 = edge_mid[m.cell_edges[c][2]];
      cells.push_back({v0, m01, m20, -1});
      cells.push_back({m01, v1, m12, -1});
      cells.push_back({m20, m12, v2, -1});
      cells.push_back({m01, m12, m20, -1});
    } else {
      const int v0 = m.cells[c][0], v1 = m.cells[c][1];
      const int v2 = m.cells[c][2], v3 = m.cells[c][3];
      const int m01 = edge_mid[m.cell_edges[c][0]];
      const int m12 = edge_mid[m.cell_edges[c][1]];
      const int m23 = edge_mid[m.cell_edges[c][2]];
      const int m30 = edge_mid[m.cell_edges[c][3]];
      const int ctr = static_cast<int>(verts.size());
      verts.push_back(m.cell_centroid(c));
      cells.push_back({v0, m01, ctr, m30});
      cells.push_back({m01, v1, m12, ctr});
      cells.push_back({ctr, m12, v2, m23});
      cells.push_back({m30, ctr, m23, v3});
    }
  }
  return assemble_mesh(m.cell_kind, std::move(verts), std::move(cells));
}

MeshStats mesh_stats(const Mesh& m) {
  MeshStats s;
  s.h = m.h;
  s.cells = m.n_cells();
  s.vertices = m.n_vertices();
  s.edges = m.n_edges();
  for (int v = 0; v < m.n_vertices(); v++)
    if (!m.vertex_boundary[v]) s.interior_vertices++;
  for (const Edge& e : m.edges)
    (e.boundary ? s.boundary_edges : s.interior_edges)++;
  return s;
}

std::vector<std::string> validate_mesh(const Mesh& m) {
  std::vector<std::string> issues;
  char buf[128];
  for (int c = 0; c < m.n_cells(); c++) {
    for (int i = 0; i < m.cell_nv(c); i++) {
      const int v = m.cells[c][i];
      if (v < 0 || v >= m.n_vertices()) {
        std::snprintf(buf, sizeof buf, "cell %d references invalid vertex %d", c, v);
        issues.emplace_back(buf);
      }
    }
    if (m.areas[c] <= 0.) {
      std::snprintf(buf, sizeof buf, "cell %d has non-positive area %.3e", c,
                    m.areas[c]);
      issues.emplace_back(buf);
    }
    if (m.cell_nv(c) == 4) {
      // Adini needs axis-aligned rectangles.
      const Vec2 d1 = m.cell_vertex(c, 1) - m.cell_vertex(c, 0);
      const Vec2 d2 = m.cell_vertex(c, 3) - m.cell_vertex(c, 0);
      if (std::abs(d1.y()) > 1e-12 * d1.norm() ||
          std::abs(d2.x()) > 1e-12 * d2.norm()) {
        std::snprintf(buf, sizeof buf, "cell %d is not an axis-aligned rectangle", c);
        issues.emplace_back(buf);
      }
    }
  }
  for (int e = 0; e < m.n_edges(); e++) {
    if (m.edges[e].n_incident < 1 || m.edges[e].n_incident > 2) {
      std::snprintf(buf, sizeof buf, "edge %d has %d incident cells", e,
                    m.edges[e].n_incident);
      issues.emplace_back(buf);
    }
    if (m.edges[e].boundary != (m.edges[e].n_incident == 1)) {
      std::snprintf(buf, sizeof buf, "edge %d has inconsistent boundary flag", e);
      issues.emplace_back(buf);
    }
  }
  double hmax = 0.;
  for (int c = 0; c < m.n_cells(); c++) hmax = std::max(hmax, m.cell_diameter(c));
  if (std::abs(hmax - m.h) > 1e-12 * std::max(1., hmax)) {
    std::snprintf(buf, sizeof buf, "stored h %.6e differs from max diameter %.6e",
                  m.h, hmax);
    issues.emplace_back(buf);
  }
  return issues;
}

double shape_regularity(const Mesh& m) {
  double worst = 0.;
  for (int c = 0; c < m.n_cells(); c++) {
    double inradius;
    if (m.cell_nv(c) == 3) {
      double per = 0.;
      for (int i = 0; i < 3; i++)
        per += (m.cell_vertex(c, i) - m.cell_vertex(c, (i + 1) % 3)).norm();
      inradius = 2. * m.cell_area(c) / per;
    } else {
      const double w = (m.cell_vertex(c, 1) - m.cell_vertex(c, 0)).norm();
      const double hgt = (m.cell_vertex(c, 3) - m.cell_vertex(c, 0)).norm();
      inradius = 0.5 * std::min(w, hgt);
    }
    worst = std::max(worst, m.cell_diameter(c) / inradius);
  }
  return worst;
}

void dump_mesh(const Mesh& m, std::ostream& out) {
  char buf[128];
  for (const Vec2& p : m.vertices) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g\n", p.x(), p.y());
    out << buf;
  }
  for (int c = 0; c < m.n_cells(); c++) {
    out << "c";
    for (int i = 0; i < m.cell_nv(c); i++) out << ' ' << m.cells[c][i];
    out << '\n';
  }
  for (const Edge& e : m.edges)
    out << "e " << e.v[0] << ' ' << e.v[1] << ' ' << (e.boundary ? 1 : 0) << '\n';
}

}  // namespace hdm
