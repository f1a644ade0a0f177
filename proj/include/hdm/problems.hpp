#ifndef HDM_PROBLEMS_HPP
#define HDM_PROBLEMS_HPP

#include <functional>
#include <vector>

#include "hdm/exact.hpp"
#include "hdm/mesh.hpp"

namespace hdm {

inline Mat2 cofactor2(const Mat2& m) {
  Mat2 c;
  c << m(1, 1), -m(1, 0), -m(0, 1), m(0, 0);
  return c;
}

/// [xi, chi] = xi_xx chi_yy + xi_yy chi_xx - 2 xi_xy chi_xy on Hessians.
inline double vk_bracket(const Mat2& hx, const Mat2& hc) {
  return cofactor2(hx).cwiseProduct(hc).sum();
}

/// One semilinear fourth-order system in the common weak shape
///   A(Hess Psi, Hess Phi) + B(Hess Psi, Grad Psi, Grad Phi) = L(Pi Phi).
/// The trilinear form vanishes for equal second and third arguments, which
/// gives the a priori bound alpha_bar ||Hess Psi||^2 <= |L(Pi Psi)|.
struct ProblemSpec {
  enum class Kind { NavierStokes, VonKarman };

  Kind kind = Kind::NavierStokes;
  int k = 1;
  double nu = 1.;         // viscosity, Navier-Stokes only
  double alpha_bar = 1.;  // coercivity constant of A
  bool b_enabled = true;
  std::vector<std::function<double(const Vec2&)>> load;
  ExactBundle exact;

  double a_density(const Mat2* lam, const Mat2* gam) const {
    if (kind == Kind::NavierStokes)
      return nu * lam[0].cwiseProduct(gam[0]).sum();
    return lam[0].cwiseProduct(gam[0]).sum() +
           2. * lam[1].cwiseProduct(gam[1]).sum();
  }

  double b_density(const Mat2* lam, const Vec2* xi, const Vec2* th) const {
    if (!b_enabled) return 0.;
    if (kind == Kind::NavierStokes)
      return lam[0].trace() * (-xi[0].x() * th[0].y() + xi[0].y() * th[0].x());
    const Mat2 c = cofactor2(lam[0]);
    return (c * th[0]).dot(xi[1]) - (c * xi[0]).dot(th[1]);
  }

  /// Weight of component c in the load functional.
  double load_weight(int c) const {
    return (kind == Kind::VonKarman && c == 1) ? 2. : 1.;
  }

  /// Copy with the trilinear form switched off (biharmonic part only).
  ProblemSpec linearized() const {
    ProblemSpec p = *this;
    p.b_enabled = false;
    return p;
  }
};

ProblemSpec ns_problem(double nu);
ProblemSpec vk_problem();

/// Unit-square benchmarks with u = x^2 (1-x)^2 y^2 (1-y)^2 (and v = u for the
/// plate system); polynomial right-hand sides derived exactly.
ProblemSpec manufactured_square_ns(double nu);
ProblemSpec manufactured_square_vk();

/// L-shaped domain benchmark: u = v = (x^2-1)^2 (y^2-1)^2 r^(1+g) phi(theta)
/// with the clamped-corner singular exponent g ~ 0.5445 for the 3*pi/2 sector.
ProblemSpec manufactured_lshape_vk();

/// |sin^2(g w) - g^2 sin^2(w)| for the exponent and sector angle used above.
double lshape_char_residual();

/// Max over sample points of |strong operator applied to exact - load|, with
/// all derivatives taken by sixth-order finite differences of the exact value
/// function only. Points too close to the L-shape corner should be avoided.
double validate_rhs(const ProblemSpec& p, const std::vector<Vec2>& points,
                    double fd_step);

}  // namespace hdm

#endif
