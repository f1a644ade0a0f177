#ifndef HDM_HD_HPP
#define HDM_HD_HPP

#include <vector>

#include "hdm/elements.hpp"
#include "hdm/exact.hpp"
#include "hdm/mesh.hpp"
#include "hdm/quadrature.hpp"

namespace hdm {

enum class ElementKind { Morley, Adini, Gr };

const char* element_name(ElementKind k);

/// Reconstruction operators of all local basis functions at a set of points
/// in one cell: pi[q * nloc + j], grad[q * nloc + j], hess[q * nloc + j].
struct LocalTable {
  int nloc = 0;
  std::vector<double> pi;
  std::vector<Vec2> grad;
  std::vector<Mat2> hess;
};

/// A discretisation of the Hessian quadruplet (X0, Pi, Grad, Hess) over a
/// mesh, with homogeneous value and normal-derivative boundary conditions
/// built into the dof set. Constrained local dofs carry global index -1.
class HessianDiscretisation {
 public:
  HessianDiscretisation(const Mesh& mesh, ElementKind kind);

  const Mesh& mesh() const { return *mesh_; }
  ElementKind kind() const { return kind_; }
  int n_dofs() const { return n_dofs_; }
  int n_cells() const { return mesh_->n_cells(); }
  const std::vector<int>& cell_dofs(int cell) const { return cell_dofs_[cell]; }

  /// Quadrature exact to `degree` for the reconstruction products on this
  /// cell. For the gradient-recovery element the reconstructed Hessian is
  /// only piecewise polynomial on the four red children, so the rule is laid
  /// out child by child; pass subdivide = false to rule out the splitting
  /// when only Pi (a polynomial on the whole cell) is integrated.
  void cell_quadrature(int cell, int degree, std::vector<Vec2>& points,
                       std::vector<double>& weights, bool subdivide = true) const;

  /// Rule of the given degree laid out on the cell split `splits` times into
  /// four congruent children. The splits nest, so splits >= 1 also keeps
  /// every sub-rule inside a single red child of the gradient-recovery
  /// element.
  void refined_quadrature(int cell, int degree, int splits,
                          std::vector<Vec2>& points,
                          std::vector<double>& weights) const;

  /// Default quadrature degree for assembling the scheme's forms.
  int form_degree() const;

  void tabulate(int cell, const std::vector<Vec2>& points, LocalTable& table) const;

  const GrMethod& gr() const { return gr_; }

 private:
  const Mesh* mesh_;
  ElementKind kind_;
  int n_dofs_ = 0;
  std::vector<std::vector<int>> cell_dofs_;
  std::vector<MorleyLocal> morley_;
  std::vector<AdiniLocal> adini_;
  GrMethod gr_;
};

HessianDiscretisation build_hd(const Mesh& mesh, ElementKind kind);

/// Coefficients of a k-component discrete field: column c holds component c.
struct DiscreteField {
  int k = 1;
  Eigen::MatrixXd coeffs;
};

DiscreteField zero_field(const HessianDiscretisation& hd, int k);

/// Canonical interpolant: vertex values and edge normal derivatives (Morley),
/// vertex values and first derivatives (Adini), vertex values (GR).
DiscreteField interpolate(const HessianDiscretisation& hd, const ExactBundle& u);

/// Reconstructions of one field at one point.
struct FieldValues {
  double pi = 0.;
  Vec2 grad = Vec2::Zero();
  Mat2 hess = Mat2::Zero();
};

/// values[q * field.k + c] = reconstructions of component c at points[q].
void reconstruct(const HessianDiscretisation& hd, const DiscreteField& field,
                 int cell, const std::vector<Vec2>& points,
                 std::vector<FieldValues>& values);

/// Norm on X0: L2 norm of the reconstructed Hessian summed over components.
double hd_norm(const HessianDiscretisation& hd, const DiscreteField& field);

}  // namespace hdm

#endif
