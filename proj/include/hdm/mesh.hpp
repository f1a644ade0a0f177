#ifndef HDM_MESH_HPP
#define HDM_MESH_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hdm {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

enum class CellKind { Tri3, Quad4 };
enum class DomainKind { UnitSquare, LShape };
enum class MeshPattern { Diagonal, CrissCross, Rectangles };

/// Mesh edge. The unit normal is fixed once at construction: it points out of
/// the lower-index incident cell (out of the domain for boundary edges), so a
/// normal-derivative degree of freedom attached to the edge is single-valued.
struct Edge {
  std::array<int, 2> v{{-1, -1}};
  std::array<int, 2> cells{{-1, -1}};
  int n_incident = 0;
  Vec2 midpoint = Vec2::Zero();
  Vec2 normal = Vec2::Zero();
  double length = 0.;
  bool boundary = false;
};

/// Conforming mesh of triangles or axis-aligned rectangles with full edge
/// connectivity. All meshes in the project go through assemble_mesh so the
/// derived data (edges, normals, boundary flags, h) is uniform.
class Mesh {
public:
  CellKind cell_kind = CellKind::Tri3;
  std::vector<Vec2> vertices;
  // Cell vertices, counterclockwise; triangles leave slot 3 at -1.
  std::vector<std::array<int, 4>> cells;
  std::vector<Edge> edges;
  // Triangles: edge i is opposite vertex i. Quads: edge i joins vertices i, i+1.
  std::vector<std::array<int, 4>> cell_edges;
  std::vector<bool> vertex_boundary;
  std::vector<double> areas;
  double h = 0.;  // max cell diameter

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int cell_nv(int c) const { return cells[c][3] < 0 ? 3 : 4; }
  const Vec2& vertex(int v) const { return vertices[v]; }
  const Vec2& cell_vertex(int c, int i) const { return vertices[cells[c][i]]; }
  double cell_area(int c) const { return areas[c]; }
  double cell_diameter(int c) const;
  Vec2 cell_centroid(int c) const;
};

/// Builds the derived mesh data from raw vertices and cells. Invalid input
/// (flipped cells, non-conforming incidence) is recorded as-is and reported by
/// validate_mesh rather than rejected here.
Mesh assemble_mesh(CellKind kind, std::vector<Vec2> vertices,
                   std::vector<std::array<int, 4>> cells);

/// Structured mesh of the unit square (0,1)^2 or the L-shaped domain
/// (-1,1)^2 \ [0,1)x(-1,0], with n cells per unit length. Patterns: Diagonal
/// splits each grid square bottom-left to top-right, CrissCross splits by both
/// diagonals through an added centre vertex, Rectangles keeps the squares.
Mesh build_structured_mesh(DomainKind domain, MeshPattern pattern, int n);

/// Uniform red refinement: triangles are quadrisected through edge midpoints,
/// rectangles through edge midpoints and the centre. Halves h.
Mesh red_refine(const Mesh& m);

struct MeshStats {
  double h = 0.;
  int cells = 0;
  int vertices = 0;
  int edges = 0;
  int interior_vertices = 0;
  int interior_edges = 0;
  int boundary_edges = 0;
};
MeshStats mesh_stats(const Mesh& m);

/// Conformity and orientation checks; returns one message per violation
/// (empty means the mesh is valid).
std::vector<std::string> validate_mesh(const Mesh& m);

/// Max diameter/inradius ratio over all cells.
double shape_regularity(const Mesh& m);

/// Plain-text dump: "v x y" per vertex, "c i j k [l]" per cell,
/// "e i j b" per edge (b = boundary flag).
void dump_mesh(const Mesh& m, std::ostream& out);

}  // namespace hdm

#endif
