#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hdm/problems.hpp"

using namespace hdm;

namespace {

Mat2 random_mat(std::mt19937& rng) {
  std::uniform_real_distribution<double> unif(-1., 1.);
  Mat2 m;
  m << unif(rng), unif(rng), unif(rng), unif(rng);
  return m;
}

Mat2 random_sym(std::mt19937& rng) {
  Mat2 m = random_mat(rng);
  return 0.5 * (m + m.transpose());
}

Vec2 random_vec(std::mt19937& rng) {
  std::uniform_real_distribution<double> unif(-1., 1.);
  return Vec2(unif(rng), unif(rng));
}

}  // namespace

TEST_SUITE_BEGIN("problems");

TEST_CASE("cofactor identity: cof(H) : H = 2 det H") {
  std::mt19937 rng(101);
  for (int t = 0; t < 100; ++t) {
    const Mat2 h = random_mat(rng);
    const double lhs = cofactor2(h).cwiseProduct(h).sum();
    CHECK(std::abs(lhs - 2. * h.determinant()) <= 1e-14);
  }
}

TEST_CASE("plate bracket is symmetric") {
  std::mt19937 rng(102);
  for (int t = 0; t < 100; ++t) {
    const Mat2 a = random_sym(rng);
    const Mat2 b = random_sym(rng);
    CHECK(std::abs(vk_bracket(a, b) - vk_bracket(b, a)) <= 1e-14);
  }
}

TEST_CASE("trilinear density vanishes on equal second and third arguments") {
  std::mt19937 rng(103);
  for (const ProblemSpec& p : {ns_problem(0.7), vk_problem()}) {
    for (int t = 0; t < 100; ++t) {
      Mat2 lam[2] = {random_mat(rng), random_mat(rng)};
      Vec2 th[2] = {random_vec(rng), random_vec(rng)};
      double lam_norm = 0., th_sq = 0.;
      for (int c = 0; c < p.k; ++c) {
        lam_norm += lam[c].squaredNorm();
        th_sq += th[c].squaredNorm();
      }
      lam_norm = std::sqrt(lam_norm);
      const double bound = 1e-12 * lam_norm * th_sq;
      CHECK(std::abs(p.b_density(lam, th, th)) <= bound);
    }
  }
}

TEST_CASE("trilinear density is genuinely nonzero off the diagonal") {
  std::mt19937 rng(104);
  for (const ProblemSpec& p : {ns_problem(1.), vk_problem()}) {
    double max_off = 0.;
    for (int t = 0; t < 20; ++t) {
      Mat2 lam[2] = {random_mat(rng), random_mat(rng)};
      Vec2 xi[2] = {random_vec(rng), random_vec(rng)};
      Vec2 th[2] = {random_vec(rng), random_vec(rng)};
      max_off = std::max(max_off, std::abs(p.b_density(lam, xi, th)));
      // Antisymmetry in the last two slots, which is what kills the diagonal.
      const double fwd = p.b_density(lam, xi, th);
      const double bwd = p.b_density(lam, th, xi);
      CHECK(std::abs(fwd + bwd) <= 1e-13);
    }
    CHECK(max_off > 1e-3);
  }
}

TEST_CASE("problem descriptors carry the advertised structure") {
  ProblemSpec ns = ns_problem(3.);
  CHECK(ns.kind == ProblemSpec::Kind::NavierStokes);
  CHECK(ns.k == 1);
  CHECK(ns.nu == 3.);
  CHECK(ns.alpha_bar == doctest::Approx(3.));
  CHECK(ns.load_weight(0) == 1.);

  ProblemSpec vk = vk_problem();
  CHECK(vk.kind == ProblemSpec::Kind::VonKarman);
  CHECK(vk.k == 2);
  CHECK(vk.alpha_bar == doctest::Approx(1.));
  CHECK(vk.load_weight(0) == 1.);
  CHECK(vk.load_weight(1) == 2.);

  ProblemSpec lin = vk.linearized();
  CHECK(!lin.b_enabled);
  std::mt19937 rng(105);
  Mat2 lam[2] = {random_mat(rng), random_mat(rng)};
  Vec2 xi[2] = {random_vec(rng), random_vec(rng)};
  Vec2 th[2] = {random_vec(rng), random_vec(rng)};
  CHECK(lin.b_density(lam, xi, th) == 0.);
}

TEST_CASE("manufactured square solutions are clamped and consistent") {
  for (const ProblemSpec& p : {manufactured_square_ns(2.), manufactured_square_vk()}) {
    REQUIRE(static_cast<int>(p.exact.size()) == p.k);
    REQUIRE(static_cast<int>(p.load.size()) == p.k);
    for (int c = 0; c < p.k; ++c) {
      for (double t : {0., 0.25, 0.7, 1.}) {
        for (const Vec2& x :
             {Vec2(t, 0.), Vec2(t, 1.), Vec2(0., t), Vec2(1., t)}) {
          CHECK(std::abs(p.exact[c].value(x)) < 1e-14);
          CHECK(p.exact[c].grad(x).norm() < 1e-14);
        }
      }
    }
  }
  // The plate system uses the same function for both components.
  ProblemSpec vk = manufactured_square_vk();
  for (const Vec2& x : {Vec2(0.3, 0.4), Vec2(0.8, 0.15)}) {
    CHECK(vk.exact[0].value(x) == doctest::Approx(vk.exact[1].value(x)));
    CHECK((vk.exact[0].hess(x) - vk.exact[1].hess(x)).norm() < 1e-15);
  }
}

TEST_CASE("manufactured loads match finite differences of the strong form") {
  std::vector<Vec2> pts;
  for (int i = 1; i <= 9; ++i)
    for (int j = 1; j <= 9; ++j) pts.push_back(Vec2(i / 10., j / 10.));
  CHECK(validate_rhs(manufactured_square_ns(2.), pts, 0.02) <= 1e-5);
  CHECK(validate_rhs(manufactured_square_vk(), pts, 0.02) <= 1e-5);
}

TEST_CASE("singular-corner benchmark: exponent, clamping, and load residual") {
  CHECK(lshape_char_residual() <= 1e-9);

  ProblemSpec p = manufactured_lshape_vk();
  REQUIRE(p.k == 2);

  // Clamped on the outer boundary and on both legs of the re-entrant corner.
  for (int c = 0; c < 2; ++c) {
    for (const Vec2& x : {Vec2(-1., 0.3), Vec2(0.4, 1.), Vec2(-0.5, -1.),
                          Vec2(1., 0.6), Vec2(0.35, 0.), Vec2(0., -0.45)}) {
      CHECK(std::abs(p.exact[c].value(x)) < 1e-12);
      CHECK(p.exact[c].grad(x).norm() < 1e-8);
    }
  }

  // Jet self-consistency away from the corner: gradient against value
  // differences, Hessian against gradient differences.
  const double h = 1e-5;
  for (const Vec2& x : {Vec2(-0.5, 0.4), Vec2(-0.45, -0.5), Vec2(0.5, 0.55),
                        Vec2(-0.3, 0.05)}) {
    const ExactComponent& u = p.exact[0];
    Vec2 g_fd((u.value(x + Vec2(h, 0.)) - u.value(x - Vec2(h, 0.))) / (2. * h),
              (u.value(x + Vec2(0., h)) - u.value(x - Vec2(0., h))) / (2. * h));
    CHECK((g_fd - u.grad(x)).norm() <= 1e-6 * (1. + u.grad(x).norm()));
    Mat2 h_fd;
    h_fd.col(0) = (u.grad(x + Vec2(h, 0.)) - u.grad(x - Vec2(h, 0.))) / (2. * h);
    h_fd.col(1) = (u.grad(x + Vec2(0., h)) - u.grad(x - Vec2(0., h))) / (2. * h);
    CHECK((0.5 * (h_fd + h_fd.transpose()) - u.hess(x)).norm() <=
          1e-6 * (1. + u.hess(x).norm()));
    CHECK(std::abs(h_fd(1, 0) - h_fd(0, 1)) <= 1e-5);
  }

  // Load residual by finite differences at points at least 0.2 from the corner.
  std::vector<Vec2> pts;
  for (double x = -0.9; x <= 0.91; x += 0.15)
    for (double y = -0.9; y <= 0.91; y += 0.15) {
      if (x > -0.05 && y < 0.05) continue;  // missing quadrant plus margin
      if (Vec2(x, y).norm() < 0.2) continue;
      pts.push_back(Vec2(x, y));
    }
  REQUIRE(pts.size() > 50);
  CHECK(validate_rhs(p, pts, 5e-3) <= 1e-4);
}

TEST_SUITE_END();
