#include "hdm/problems.hpp"

#include <cmath>

#include "poly.hpp"

namespace hdm {

namespace {

ExactComponent poly_component(const Poly& p) {
  const Poly px = p.dx(), py = p.dy();
  const Poly pxx = px.dx(), pxy = px.dy(), pyy = py.dy();
  ExactComponent c;
  c.value = [p](const Vec2& x) { return p(x.x(), x.y()); };
  c.grad = [px, py](const Vec2& x) {
    return Vec2(px(x.x(), x.y()), py(x.x(), x.y()));
  };
  c.hess = [pxx, pxy, pyy](const Vec2& x) {
    Mat2 h;
    const double v = pxy(x.x(), x.y());
    h << pxx(x.x(), x.y()), v, v, pyy(x.x(), x.y());
    return h;
  };
  return c;
}

std::function<double(const Vec2&)> poly_load(const Poly& p) {
  return [p](const Vec2& x) { return p(x.x(), x.y()); };
}

Poly square_bump() {
  const Poly one = Poly::mono(0, 0, 1.);
  const Poly x = Poly::mono(1, 0, 1.);
  const Poly y = Poly::mono(0, 1, 1.);
  const Poly bx = x * x * (one - x) * (one - x);
  const Poly by = y * y * (one - y) * (one - y);
  return bx * by;
}

}  // namespace

ProblemSpec ns_problem(double nu) {
  ProblemSpec p;
  p.kind = ProblemSpec::Kind::NavierStokes;
  p.k = 1;
  p.nu = nu;
  p.alpha_bar = nu;
  return p;
}

ProblemSpec vk_problem() {
  ProblemSpec p;
  p.kind = ProblemSpec::Kind::VonKarman;
  p.k = 2;
  p.alpha_bar = 1.;
  return p;
}

ProblemSpec manufactured_square_ns(double nu) {
  ProblemSpec p = ns_problem(nu);
  const Poly u = square_bump();
  const Poly lap = u.laplacian();
  // nu lap^2 u - d_x(lap u) u_y + d_y(lap u) u_x
  const Poly f =
      lap.laplacian() * nu - lap.dx() * u.dy() + lap.dy() * u.dx();
  p.load = {poly_load(f)};
  p.exact = {poly_component(u)};
  return p;
}

ProblemSpec manufactured_square_vk() {
  ProblemSpec p = vk_problem();
  const Poly u = square_bump();
  const Poly uxx = u.dx().dx(), uyy = u.dy().dy(), uxy = u.dx().dy();
  const Poly bracket = uxx * uyy * 2. - uxy * uxy * 2.;
  const Poly bilap = u.laplacian().laplacian();
  const Poly f = bilap - bracket;
  const Poly g = bilap + bracket * 0.5;
  p.load = {poly_load(f), poly_load(g)};
  const ExactComponent c = poly_component(u);
  p.exact = {c, c};
  return p;
}

namespace {

// Sixth-order centred stencils; exact through polynomial degree 7 (second
// derivative) and 6 (first derivative) per variable.
template <class F>
double fd1(const F& f, const Vec2& x, const Vec2& dir, double h) {
  auto at = [&](int s) { return f(x + double(s) * h * dir); };
  return (-at(-3) + 9. * at(-2) - 45. * at(-1) + 45. * at(1) - 9. * at(2) +
          at(3)) /
         (60. * h);
}

template <class F>
double fd2(const F& f, const Vec2& x, const Vec2& dir, double h) {
  auto at = [&](int s) { return f(x + double(s) * h * dir); };
  return (2. * at(3) - 27. * at(2) + 270. * at(1) - 490. * at(0) +
          270. * at(-1) - 27. * at(-2) + 2. * at(-3)) /
         (180. * h * h);
}

}  // namespace

double validate_rhs(const ProblemSpec& p, const std::vector<Vec2>& points,
                    double h) {
  const Vec2 ex(1., 0.), ey(0., 1.);
  double worst = 0.;
  for (const Vec2& x0 : points) {
    std::vector<double> residual(p.k, 0.);
    auto lap = [&](const std::function<double(const Vec2&)>& f, const Vec2& x) {
      return fd2(f, x, ex, h) + fd2(f, x, ey, h);
    };
    if (p.kind == ProblemSpec::Kind::NavierStokes) {
      const auto& u = p.exact[0].value;
      auto lu = [&](const Vec2& x) { return lap(u, x); };
      const double bilap = fd2(lu, x0, ex, h) + fd2(lu, x0, ey, h);
      const double dxlap = fd1(lu, x0, ex, h);
      const double dylap = fd1(lu, x0, ey, h);
      const double ux = fd1(u, x0, ex, h), uy = fd1(u, x0, ey, h);
      residual[0] = p.nu * bilap - dxlap * uy + dylap * ux - p.load[0](x0);
    } else {
      const auto& u = p.exact[0].value;
      const auto& v = p.exact[1].value;
      auto lu = [&](const Vec2& x) { return lap(u, x); };
      auto lv = [&](const Vec2& x) { return lap(v, x); };
      const double bilap_u = fd2(lu, x0, ex, h) + fd2(lu, x0, ey, h);
      const double bilap_v = fd2(lv, x0, ex, h) + fd2(lv, x0, ey, h);
      const double uxx = fd2(u, x0, ex, h), uyy = fd2(u, x0, ey, h);
      const double vxx = fd2(v, x0, ex, h), vyy = fd2(v, x0, ey, h);
      auto uyf = [&](const Vec2& x) { return fd1(u, x, ey, h); };
      auto vyf = [&](const Vec2& x) { return fd1(v, x, ey, h); };
      const double uxy = fd1(uyf, x0, ex, h);
      const double vxy = fd1(vyf, x0, ex, h);
      const double buv = uxx * vyy + uyy * vxx - 2. * uxy * vxy;
      const double buu = 2. * (uxx * uyy - uxy * uxy);
      residual[0] = bilap_u - buv - p.load[0](x0);
      residual[1] = bilap_v + 0.5 * buu - p.load[1](x0);
    }
    for (double r : residual) worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace hdm
