#ifndef HDM_DIAGNOSTICS_HPP
#define HDM_DIAGNOSTICS_HPP

#include <functional>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "hdm/hd.hpp"
#include "hdm/problems.hpp"
#include "hdm/solver.hpp"

namespace hdm {

/// Factorised Gram matrices of Pi and Hess on the scalar dof space; the
/// backbone of every Riesz computation below. Build once per discretisation
/// when several diagnostics run on the same mesh.
class GramOperators {
 public:
  explicit GramOperators(const HessianDiscretisation& hd);

  const HessianDiscretisation& hd() const { return *hd_; }
  const Eigen::SparseMatrix<double>& pi_gram() const { return pi_.matrix(); }
  const Eigen::SparseMatrix<double>& hess_gram() const {
    return hess_.matrix();
  }

  Eigen::VectorXd apply_pi(const Eigen::VectorXd& v) const;
  Eigen::VectorXd apply_hess(const Eigen::VectorXd& v) const;
  Eigen::VectorXd solve_hess(const Eigen::VectorXd& r) const;

  /// sqrt(r^T G^-1 r): dual norm of the functional r against the norm induced
  /// by the respective Gram matrix.
  double riesz_pi(const Eigen::VectorXd& r) const;
  double riesz_hess(const Eigen::VectorXd& r) const;

 private:
  const HessianDiscretisation* hd_;
  SystemMatrix pi_, hess_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> pi_fac_, hess_fac_;
};

/// Norm-equivalence constants of a discretisation:
///   ||Pi w||_L2   <= l2_part ||Hess w||_L2,
///   ||Grad w||_L4 <= l4_part ||Hess w||_L2.
/// l2_part is the square root of the top generalised eigenvalue of the Gram
/// pair. l4_part is a sampled lower estimate (random unit fields plus the
/// l2 maximiser); it is meant for boundedness checks, not a certified bound.
struct CoercivityConstants {
  double l2_part = 0.;
  double l4_part = 0.;
  int iterations = 0;         // inverse-power steps taken by the eigen-solve
  Eigen::VectorXd maximiser;  // l2 maximiser, unit Hess norm
};

struct CoercivityOptions {
  int l4_samples = 200;
  unsigned seed = 0x9e3779b9u;
  double tol = 1e-13;  // relative Rayleigh-quotient stall
  int max_iters = 20000;
};

CoercivityConstants coercivity_constant(const GramOperators& g,
                                        const CoercivityOptions& opts = {});

/// Same l2 constant through a dense generalised eigen-solve; reference path
/// for small meshes.
double coercivity_l2_dense(const GramOperators& g);

/// Interpolation error of the scheme at the canonical interpolant w of phi:
///   ||Pi w - phi||_L2 + ||Grad w - grad phi||_L4 + ||Hess w - hess phi||_L2.
/// An upper bound for the scheme's consistency measure, zero (to quadrature
/// accuracy) whenever phi lies in the reconstructed space.
double consistency_upper(const HessianDiscretisation& hd,
                         const ExactComponent& phi);

/// Defect of the discrete double integration by parts against a smooth,
/// symmetric matrix field xi (div_div_xi = sum_ij d_i d_j xi_ij):
///   r_i = int div_div_xi Pi chi_i - xi : Hess chi_i,
/// returned as the dual norm sqrt(r^T G_hess^-1 r).
double limit_conformity_w(const GramOperators& g,
                          const std::function<Mat2(const Vec2&)>& xi,
                          const std::function<double(const Vec2&)>& div_div_xi);

/// Defect of the discrete single integration by parts against a smooth vector
/// field phi:
///   r_i = int Grad chi_i . phi + Pi chi_i div_phi,
/// returned as sqrt(r^T G_hess^-1 r). Zero for any element whose
/// reconstructed gradient is the distributional gradient of a zero-trace
/// function.
double limit_conformity_what(const GramOperators& g,
                             const std::function<Vec2(const Vec2&)>& phi,
                             const std::function<double(const Vec2&)>& div_phi);

/// Fixed smooth fields used by the stock conformity reports:
/// xi = [[s, q], [q, s]] with s = sin(pi x) sin(pi y), q = x^2 y (1 - x);
/// phi = (s, x y (1 - x)(1 - y)).
std::function<Mat2(const Vec2&)> test_xi();
std::function<double(const Vec2&)> test_div_div_xi();
std::function<Vec2(const Vec2&)> test_phi();
std::function<double(const Vec2&)> test_div_phi();

/// Piecewise (element-local) scalar field: the callables receive a cell index
/// and a physical point inside that cell. `degree` is the per-cell polynomial
/// degree and sizes the quadrature.
struct BrokenField {
  int degree = 2;
  std::function<double(int, const Vec2&)> value;
  std::function<Vec2(int, const Vec2&)> grad;
};

/// Pi reconstruction of component `comp` of a discrete field as a broken
/// field. The gradient is the broken gradient of the reconstruction itself,
/// which for the gradient-recovery element differs from the recovered one.
BrokenField pi_field(const HessianDiscretisation& hd, const DiscreteField& f,
                     int comp = 0);

/// Broken H1-type dG norm,
///   |w|^2 = sum_cells ||grad w||_L2^2 + sum_edges h_e^-1 ||[w]||_L2(e)^2,
/// with every edge included; the exterior trace on boundary edges is zero.
double dg_norm(const Mesh& mesh, const BrokenField& w);

/// Largest stabilisation magnitude |S_h| over all cells of the
/// gradient-recovery Hessian; zero for the other elements.
double gr_max_stabilisation(const HessianDiscretisation& hd);

/// Empirical a priori bound ||Psi||_D <= C / alpha_bar ||L||:
///   lhs = ||Psi||_D,  rhs = cd_l2 * load_norm / alpha_bar,
/// with load_norm = sup_w |L(Pi w)| / ||Pi w||_L2 computed by a Riesz solve
/// on the Pi Gram (block diagonal over components). Pass a precomputed
/// cd_l2 > 0 to skip the eigen-solve.
struct StabilityBound {
  double lhs = 0.;
  double rhs = 0.;
  double load_norm = 0.;
  double cd_l2 = 0.;
  bool holds = false;
};

StabilityBound stability_bound_check(const GramOperators& g,
                                     const ProblemSpec& p,
                                     const DiscreteField& psi,
                                     double cd_l2 = -1.);

/// One mesh level of the diagnostics block attached to a convergence study.
struct DiagnosticsRow {
  double h = 0.;
  double cd_l2 = 0.;
  double cd_l4 = 0.;
  std::vector<double> sd;  // consistency upper bound per exact component
  double wd = 0.;          // limit-conformity defect against test_xi
  double what = 0.;        // integration-by-parts defect against test_phi
  double dg_ratio = 0.;    // dG(Pi w) / ||w||_D for a seeded random field
  double gr_max_s = 0.;
  double stab_lhs = 0.;
  double stab_rhs = 0.;
};

DiagnosticsRow diagnostics_row(const HessianDiscretisation& hd,
                               const ProblemSpec& p, const DiscreteField& psi);

}  // namespace hdm

#endif
