#include <array>
#include <cmath>
#include <map>

#include "hdm/problems.hpp"

namespace hdm {

namespace {

// Corner exponent for the clamped 3*pi/2 sector: non-characteristic root of
// sin^2(g*w) = g^2 sin^2(w).
constexpr double kGamma = 0.5444837367;
const double kOmega = 1.5 * M_PI;

// Trigonometric polynomial sum_m a_m cos((gamma+m) theta) + b_m sin(...),
// closed under d/dtheta and under multiplication by cos theta, sin theta.
struct AngularPoly {
  std::map<int, std::array<double, 2>> terms;  // offset m -> {cos, sin}

  void add(int m, double c, double s) {
    auto& t = terms[m];
    t[0] += c;
    t[1] += s;
  }
  AngularPoly scaled(double f) const {
    AngularPoly r = *this;
    for (auto& [m, t] : r.terms) {
      t[0] *= f;
      t[1] *= f;
    }
    return r;
  }
  AngularPoly plus(const AngularPoly& o) const {
    AngularPoly r = *this;
    for (const auto& [m, t] : o.terms) r.add(m, t[0], t[1]);
    return r;
  }
  AngularPoly deriv() const {
    AngularPoly r;
    for (const auto& [m, t] : terms) {
      const double mu = kGamma + m;
      r.add(m, mu * t[1], -mu * t[0]);
    }
    return r;
  }
  AngularPoly mul_cos() const {
    AngularPoly r;
    for (const auto& [m, t] : terms) {
      r.add(m + 1, 0.5 * t[0], 0.5 * t[1]);
      r.add(m - 1, 0.5 * t[0], 0.5 * t[1]);
    }
    return r;
  }
  AngularPoly mul_sin() const {
    AngularPoly r;
    for (const auto& [m, t] : terms) {
      r.add(m + 1, -0.5 * t[1], 0.5 * t[0]);
      r.add(m - 1, 0.5 * t[1], -0.5 * t[0]);
    }
    return r;
  }
  double eval(double theta) const {
    double v = 0.;
    for (const auto& [m, t] : terms) {
      const double mu = kGamma + m;
      v += t[0] * std::cos(mu * theta) + t[1] * std::sin(mu * theta);
    }
    return v;
  }
};

// r^beta G(theta) together with its x and y derivatives
//   D_x = r^(beta-1) (beta cos G - sin G'), D_y = r^(beta-1) (beta sin G + cos G').
struct RadialTerm {
  double beta = 0.;
  AngularPoly g;

  RadialTerm dx() const {
    return {beta - 1,
            g.scaled(beta).mul_cos().plus(g.deriv().mul_sin().scaled(-1.))};
  }
  RadialTerm dy() const {
    return {beta - 1, g.scaled(beta).mul_sin().plus(g.deriv().mul_cos())};
  }
  double eval(double r, double theta) const {
    return std::pow(r, beta) * g.eval(theta);
  }
};

// Partial derivatives of the singular factor S = r^(1+gamma) g(theta) up to
// third order, indexed [a][b] = d^(a+b) S / dx^a dy^b. S is biharmonic for
// any gamma, which removes every fourth-order S term from bilap(C*S).
struct SingularTable {
  RadialTerm d[4][4];

  SingularTable() {
    const double gm = kGamma - 1., gp = kGamma + 1.;
    const double a = std::sin(gm * kOmega) / gm - std::sin(gp * kOmega) / gp;
    const double b = std::cos(gm * kOmega) - std::cos(gp * kOmega);
    AngularPoly g0;
    g0.add(-1, a, -b / gm);
    g0.add(1, -a, b / gp);
    d[0][0] = {1. + kGamma, g0};
    for (int o = 1; o <= 3; o++)
      for (int a2 = o; a2 >= 0; a2--) {
        const int b2 = o - a2;
        d[a2][b2] = a2 > 0 ? d[a2 - 1][b2].dx() : d[a2][b2 - 1].dy();
      }
  }
};

struct Jet {
  double val = 0.;
  Vec2 grad = Vec2::Zero();
  Mat2 hess = Mat2::Zero();
  double bilap = 0.;
};

Jet lshape_jet(const Vec2& x) {
  static const SingularTable tab;
  Jet j;
  const double r = x.norm();
  if (r == 0.) return j;
  double theta = std::atan2(x.y(), x.x());
  if (theta < 0.) theta += 2. * M_PI;

  double s[4][4];
  for (int a = 0; a <= 3; a++)
    for (int b = 0; a + b <= 3; b++) s[a][b] = tab.d[a][b].eval(r, theta);

  // Cutoff (x^2-1)^2 (y^2-1)^2 and its separable derivatives.
  auto pderiv = [](double t, int o) {
    switch (o) {
      case 0: return (t * t - 1.) * (t * t - 1.);
      case 1: return 4. * t * (t * t - 1.);
      case 2: return 12. * t * t - 4.;
      case 3: return 24. * t;
      default: return 24.;
    }
  };
  double c[5][5];
  for (int a = 0; a <= 4; a++)
    for (int b = 0; a + b <= 4; b++)
      c[a][b] = pderiv(x.x(), a) * pderiv(x.y(), b);

  j.val = c[0][0] * s[0][0];
  j.grad.x() = c[1][0] * s[0][0] + c[0][0] * s[1][0];
  j.grad.y() = c[0][1] * s[0][0] + c[0][0] * s[0][1];
  j.hess(0, 0) = c[2][0] * s[0][0] + 2. * c[1][0] * s[1][0] + c[0][0] * s[2][0];
  j.hess(1, 1) = c[0][2] * s[0][0] + 2. * c[0][1] * s[0][1] + c[0][0] * s[0][2];
  j.hess(0, 1) = c[1][1] * s[0][0] + c[1][0] * s[0][1] + c[0][1] * s[1][0] +
                 c[0][0] * s[1][1];
  j.hess(1, 0) = j.hess(0, 1);

  const double lap_c = c[2][0] + c[0][2];
  const double lap_s = s[2][0] + s[0][2];
  const Vec2 grad_lap_c(c[3][0] + c[1][2], c[2][1] + c[0][3]);
  const Vec2 grad_lap_s(s[3][0] + s[1][2], s[2][1] + s[0][3]);
  const double bilap_c = c[4][0] + 2. * c[2][2] + c[0][4];
  const double hc_hs = c[2][0] * s[2][0] + 2. * c[1][1] * s[1][1] +
                       c[0][2] * s[0][2];
  j.bilap = s[0][0] * bilap_c + 2. * lap_c * lap_s +
            4. * (c[1][0] * grad_lap_s.x() + c[0][1] * grad_lap_s.y()) +
            4. * (s[1][0] * grad_lap_c.x() + s[0][1] * grad_lap_c.y()) +
            4. * hc_hs;
  return j;
}

}  // namespace

ProblemSpec manufactured_lshape_vk() {
  ProblemSpec p = vk_problem();
  ExactComponent c;
  c.value = [](const Vec2& x) { return lshape_jet(x).val; };
  c.grad = [](const Vec2& x) { return lshape_jet(x).grad; };
  c.hess = [](const Vec2& x) { return lshape_jet(x).hess; };
  p.exact = {c, c};
  auto f = [](const Vec2& x) {
    const Jet j = lshape_jet(x);
    const double bracket =
        2. * (j.hess(0, 0) * j.hess(1, 1) - j.hess(0, 1) * j.hess(0, 1));
    return j.bilap - bracket;
  };
  auto g = [](const Vec2& x) {
    const Jet j = lshape_jet(x);
    const double bracket =
        2. * (j.hess(0, 0) * j.hess(1, 1) - j.hess(0, 1) * j.hess(0, 1));
    return j.bilap + 0.5 * bracket;
  };
  p.load = {f, g};
  return p;
}

double lshape_char_residual() {
  const double s = std::sin(kGamma * kOmega);
  const double sw = std::sin(kOmega);
  return std::abs(s * s - kGamma * kGamma * sw * sw);
}

}  // namespace hdm
