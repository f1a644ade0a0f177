#ifndef HDM_SOLVER_HPP
#define HDM_SOLVER_HPP

#include <Eigen/Sparse>
#include <vector>

#include "hdm/hd.hpp"
#include "hdm/problems.hpp"

namespace hdm {

/// Sparse operator with the cell-coupling pattern of an hd/problem pair,
/// component-major layout: global row of (component c, scalar dof i) is
/// c * n_dofs + i. The pattern is built once; assemblies only refill values.
class SystemMatrix {
 public:
  SystemMatrix(const HessianDiscretisation& hd, int k);

  Eigen::SparseMatrix<double>& matrix() { return mat_; }
  const Eigen::SparseMatrix<double>& matrix() const { return mat_; }
  void set_zero();
  /// Value slot of an entry that exists in the pattern.
  double& coeff(int row, int col);

 private:
  Eigen::SparseMatrix<double> mat_;
};

/// Scalar-dof load vector stacked per component, weighted as the problem's
/// linear functional requires.
Eigen::VectorXd assemble_load(const HessianDiscretisation& hd,
                              const ProblemSpec& p, int degree = 12);

/// Scheme residual A(.) + B(.) - L(.) tested against every basis field.
/// degree <= 0 selects the element's default form quadrature.
Eigen::VectorXd assemble_residual(const HessianDiscretisation& hd,
                                  const ProblemSpec& p,
                                  const DiscreteField& psi,
                                  const Eigen::VectorXd& load,
                                  int degree = -1);

/// Exact Jacobian of the residual at psi (the residual is quadratic in the
/// state). With freeze_hessian_slot the derivative through the first slot of
/// the trilinear form is dropped, which yields the Picard operator.
void assemble_jacobian(const HessianDiscretisation& hd, const ProblemSpec& p,
                       const DiscreteField& psi, SystemMatrix& out,
                       bool freeze_hessian_slot = false, int degree = -1);

struct NewtonOptions {
  double tol = 1e-10;      // absolute residual target
  double rel_tol = 1e-10;  // relative to the load norm; the looser one wins
  int max_iters = 30;
  int form_degree = -1;  // quadrature override for A and B
};

struct SolveReport {
  DiscreteField psi;
  int iterations = 0;
  double residual_norm = 0.;
  bool converged = false;
  std::vector<double> history;
};

/// Damped Newton: full steps, halving on residual increase. Starts from zero
/// unless an initial field is given.
SolveReport newton_solve(const HessianDiscretisation& hd, const ProblemSpec& p,
                         const NewtonOptions& opts = {},
                         const DiscreteField* initial = nullptr);

/// One Picard sweep: solves the linear problem with the Hessian slot of the
/// trilinear form frozen at the current state.
DiscreteField picard_step(const HessianDiscretisation& hd, const ProblemSpec& p,
                          const DiscreteField& current, int degree = -1);

/// Map between stacked solver vectors and field coefficients.
Eigen::VectorXd field_to_vector(const DiscreteField& f);
DiscreteField vector_to_field(const HessianDiscretisation& hd, int k,
                              const Eigen::VectorXd& x);

}  // namespace hdm

#endif
