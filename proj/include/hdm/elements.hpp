#ifndef HDM_ELEMENTS_HPP
#define HDM_ELEMENTS_HPP

#include <array>
#include <functional>
#include <vector>

#include "hdm/exact.hpp"
#include "hdm/mesh.hpp"

namespace hdm {

/// Morley basis on one triangle: quadratics dual to the three vertex values
/// and the three edge-midpoint normal derivatives (taken along the globally
/// fixed edge normals, so the derivative DOF is shared as-is between the two
/// incident cells). Local DOF order: values at vertices 0..2, then normal
/// derivatives on the edges opposite vertices 0..2.
struct MorleyLocal {
  Eigen::Matrix<double, 6, 6> coeff;  // column j: monomial coefficients of basis j
  Vec2 origin = Vec2::Zero();
  double scale = 1.;
  void eval(const Vec2& x, double* val, Vec2* grad, Mat2* hess) const;
};
MorleyLocal morley_local_basis(const Mesh& m, int cell);

/// Adini basis on one axis-aligned rectangle: cubics enriched with x*y^3 and
/// x^3*y, dual to value, d/dx and d/dy at the four corners. Local DOF order:
/// (value, dx, dy) per corner 0..3.
struct AdiniLocal {
  Eigen::Matrix<double, 12, 12> coeff;
  Vec2 centre = Vec2::Zero();
  double sx = 1., sy = 1.;  // half-widths
  void eval(const Vec2& x, double* val, Vec2* grad, Mat2* hess) const;
};
AdiniLocal adini_local_basis(const Mesh& m, int cell);

/// Gradient-recovery structures on a triangle mesh with continuous P1 space:
/// the biorthogonal averaging projector Q_h (dual basis 4*hat - 1 on each
/// vertex patch) and the piecewise-constant stabilisation S_h on the four red
/// children of each cell (direction (1,1)/sqrt(2), scalars +1 on the corner
/// children and -3 on the medial child; the unique moment-free pattern up to
/// scaling, normalised to min |s| = 1).
struct GrMethod {
  const Mesh* mesh = nullptr;
  std::vector<std::vector<int>> vertex_cells;
  std::vector<double> patch_area;

  struct CellData {
    std::array<Vec2, 3> hat_grad;
    // Interior vertices whose recovered-gradient basis touches this cell.
    std::vector<int> dof_vertices;
    std::vector<int> local_vertex;                 // position in cell or -1
    std::vector<std::array<Vec2, 3>> qh_nodal;     // Q_h grad(hat_i) at cell vertices
    std::vector<Vec2> grad_in_cell;                // grad(hat_i) on this cell
    std::vector<Mat2> grad_qh;                     // row r: grad of component r
  };
  std::vector<CellData> cells;

  Vec2 s_dir;
  double s_corner = 1., s_medial = -3.;

  /// Barycentric coordinates of x in the cell.
  std::array<double, 3> barycentric(int cell, const Vec2& x) const;
  /// Red child containing x (0..2 corner children, 3 medial).
  int child_of(int cell, const Vec2& x) const;
  /// S_h at x.
  Vec2 stabilisation(int cell, const Vec2& x) const;
};
GrMethod gr_build(const Mesh& m);

/// Max over {1, xi, eta} (local coordinates) of |int_K S_h . m| / |K|; the
/// moment conditions make this machine-zero on every cell.
double gr_p5_residual(const GrMethod& gr, int cell);

/// Biorthogonal projection of a scalar function onto the P1 space with zero
/// boundary values; returns nodal values over all mesh vertices.
Eigen::VectorXd qh_project(const GrMethod& gr,
                           const std::function<double(const Vec2&)>& g,
                           int degree);

/// Approximation-property report for the GR operators over a mesh sequence:
/// interpolation error P0, projector stability P1, recovered-gradient
/// superconvergence P2, projected-gradient consistency P3, stabilisation
/// moments P5.
struct GrPropertyRow {
  double h = 0.;
  double p0_grad_interp = 0.;    // ||grad I_h u - grad u||
  double p1_stability = 0.;      // ||Q_h g|| / ||g||
  double p2_recovery = 0.;       // ||Q_h grad I_h u - grad u||
  double p3_consistency = 0.;    // ||grad Q_h w - grad w||
  double p5_max_residual = 0.;
};
std::vector<GrPropertyRow> gr_property_report(const std::vector<Mesh>& meshes,
                                              const ExactComponent& u);

}  // namespace hdm

#endif
