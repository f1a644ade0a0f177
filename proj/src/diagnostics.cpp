#include "hdm/diagnostics.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "hdm/quadrature.hpp"

namespace hdm {

namespace {

/// Quadrature degree for defect assembly against smooth (trigonometric) data.
/// Rectangles get the tighter tensor rule so the conforming elements' defects
/// sit at machine zero instead of quadrature noise.
int defect_degree(const Mesh& m) {
  return m.cell_kind == CellKind::Quad4 ? 16 : 12;
}

}  // namespace

GramOperators::GramOperators(const HessianDiscretisation& hd)
    : hd_(&hd), pi_(hd, 1), hess_(hd, 1) {
  const int deg = hd.form_degree();
  std::vector<Vec2> pts;
  std::vector<double> wts;
  LocalTable tab;
  for (int c = 0; c < hd.n_cells(); c++) {
    const std::vector<int>& dofs = hd.cell_dofs(c);

    hd.cell_quadrature(c, deg, pts, wts, /*subdivide=*/false);
    hd.tabulate(c, pts, tab);
    const int nloc = tab.nloc;
    for (std::size_t q = 0; q < pts.size(); q++)
      for (int i = 0; i < nloc; i++) {
        if (dofs[i] < 0) continue;
        for (int j = 0; j < nloc; j++) {
          if (dofs[j] < 0) continue;
          pi_.coeff(dofs[i], dofs[j]) +=
              wts[q] * tab.pi[q * nloc + i] * tab.pi[q * nloc + j];
        }
      }

    hd.cell_quadrature(c, deg, pts, wts);
    hd.tabulate(c, pts, tab);
    for (std::size_t q = 0; q < pts.size(); q++)
      for (int i = 0; i < nloc; i++) {
        if (dofs[i] < 0) continue;
        const Mat2& hi = tab.hess[q * nloc + i];
        for (int j = 0; j < nloc; j++) {
          if (dofs[j] < 0) continue;
          hess_.coeff(dofs[i], dofs[j]) +=
              wts[q] * hi.cwiseProduct(tab.hess[q * nloc + j]).sum();
        }
      }
  }

  pi_fac_.compute(pi_.matrix());
  hess_fac_.compute(hess_.matrix());
  if (pi_fac_.info() != Eigen::Success || hess_fac_.info() != Eigen::Success)
    throw std::runtime_error("gram factorisation failed");
}

Eigen::VectorXd GramOperators::apply_pi(const Eigen::VectorXd& v) const {
  return pi_.matrix() * v;
}

Eigen::VectorXd GramOperators::apply_hess(const Eigen::VectorXd& v) const {
  return hess_.matrix() * v;
}

Eigen::VectorXd GramOperators::solve_hess(const Eigen::VectorXd& r) const {
  return hess_fac_.solve(r);
}

double GramOperators::riesz_pi(const Eigen::VectorXd& r) const {
  return std::sqrt(std::max(0., r.dot(pi_fac_.solve(r))));
}

double GramOperators::riesz_hess(const Eigen::VectorXd& r) const {
  return std::sqrt(std::max(0., r.dot(hess_fac_.solve(r))));
}

namespace {

/// L4 norm of the reconstructed gradient of a coefficient vector. The
/// reconstructed gradient is a whole-cell polynomial for every element, so
/// the unsplit rule applies.
double grad_l4(const HessianDiscretisation& hd, const Eigen::VectorXd& w) {
  DiscreteField f;
  f.k = 1;
  f.coeffs = w;
  std::vector<Vec2> pts;
  std::vector<double> wts;
  std::vector<FieldValues> vals;
  double acc = 0.;
  for (int c = 0; c < hd.n_cells(); c++) {
    hd.cell_quadrature(c, 12, pts, wts, /*subdivide=*/false);
    reconstruct(hd, f, c, pts, vals);
    for (std::size_t q = 0; q < pts.size(); q++) {
      const double g2 = vals[q].grad.squaredNorm();
      acc += wts[q] * g2 * g2;
    }
  }
  return std::pow(acc, 0.25);
}

}  // namespace

CoercivityConstants coercivity_constant(const GramOperators& g,
                                        const CoercivityOptions& opts) {
  const HessianDiscretisation& hd = g.hd();
  const int n = hd.n_dofs();
  CoercivityConstants out;
  if (n == 0) return out;

  Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  v /= std::sqrt(v.dot(g.apply_hess(v)));
  Eigen::VectorXd p = g.apply_pi(v);
  double rho = v.dot(p);
  for (int it = 1; it <= opts.max_iters; it++) {
    const Eigen::VectorXd y = g.solve_hess(p);
    const double hn = std::sqrt(std::max(0., y.dot(g.apply_hess(y))));
    if (hn <= 0.) break;
    v = y / hn;
    p = g.apply_pi(v);
    const double rho_next = v.dot(p);
    const bool settled =
        std::abs(rho_next - rho) <= opts.tol * std::max(rho_next, 1e-300);
    rho = rho_next;
    out.iterations = it;
    if (settled) break;
  }
  out.l2_part = std::sqrt(std::max(0., rho));
  out.maximiser = v;

  out.l4_part = grad_l4(hd, v);
  std::mt19937 rng(opts.seed);
  std::normal_distribution<double> dist;
  Eigen::VectorXd w(n);
  for (int s = 0; s < opts.l4_samples; s++) {
    for (int i = 0; i < n; i++) w[i] = dist(rng);
    const double hn = std::sqrt(w.dot(g.apply_hess(w)));
    if (hn <= 0.) continue;
    out.l4_part = std::max(out.l4_part, grad_l4(hd, w / hn));
  }
  return out;
}

double coercivity_l2_dense(const GramOperators& g) {
  const Eigen::MatrixXd gp(g.pi_gram());
  const Eigen::MatrixXd gh(g.hess_gram());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(gp, gh);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("dense generalised eigen-solve failed");
  return std::sqrt(std::max(0., es.eigenvalues().maxCoeff()));
}

double consistency_upper(const HessianDiscretisation& hd,
                         const ExactComponent& phi) {
  const DiscreteField w = interpolate(hd, ExactBundle{phi});
  const int splits = hd.kind() == ElementKind::Gr ? 1 : 0;
  std::vector<Vec2> pts;
  std::vector<double> wts;
  std::vector<FieldValues> vals;
  double e2 = 0., e4 = 0., eh = 0.;
  for (int c = 0; c < hd.n_cells(); c++) {
    hd.refined_quadrature(c, 12, splits, pts, wts);
    reconstruct(hd, w, c, pts, vals);
    for (std::size_t q = 0; q < pts.size(); q++) {
      const Vec2& x = pts[q];
      const double dp = vals[q].pi - phi.value(x);
      const double dg = (vals[q].grad - phi.grad(x)).squaredNorm();
      const double dh = (vals[q].hess - phi.hess(x)).squaredNorm();
      e2 += wts[q] * dp * dp;
      e4 += wts[q] * dg * dg;
      eh += wts[q] * dh;
    }
  }
  return std::sqrt(e2) + std::pow(e4, 0.25) + std::sqrt(eh);
}

namespace {

struct DefectData {
  double f = 0.;
  Vec2 v = Vec2::Zero();
  Mat2 m = Mat2::Zero();
};

/// r_i = int f Pi chi_i + v . Grad chi_i + m : Hess chi_i over the mesh.
Eigen::VectorXd assemble_defect(
    const HessianDiscretisation& hd,
    const std::function<DefectData(const Vec2&)>& data) {
  const int deg = defect_degree(hd.mesh());
  const int splits = hd.kind() == ElementKind::Gr ? 1 : 0;
  Eigen::VectorXd r = Eigen::VectorXd::Zero(hd.n_dofs());
  std::vector<Vec2> pts;
  std::vector<double> wts;
  LocalTable tab;
  for (int c = 0; c < hd.n_cells(); c++) {
    hd.refined_quadrature(c, deg, splits, pts, wts);
    hd.tabulate(c, pts, tab);
    const std::vector<int>& dofs = hd.cell_dofs(c);
    const int nloc = tab.nloc;
    for (std::size_t q = 0; q < pts.size(); q++) {
      const DefectData d = data(pts[q]);
      for (int j = 0; j < nloc; j++) {
        if (dofs[j] < 0) continue;
        r[dofs[j]] += wts[q] * (d.f * tab.pi[q * nloc + j] +
                                d.v.dot(tab.grad[q * nloc + j]) +
                                d.m.cwiseProduct(tab.hess[q * nloc + j]).sum());
      }
    }
  }
  return r;
}

}  // namespace

double limit_conformity_w(
    const GramOperators& g, const std::function<Mat2(const Vec2&)>& xi,
    const std::function<double(const Vec2&)>& div_div_xi) {
  const Eigen::VectorXd r =
      assemble_defect(g.hd(), [&](const Vec2& x) {
        DefectData d;
        d.f = div_div_xi(x);
        d.m = -xi(x);
        return d;
      });
  return g.riesz_hess(r);
}

double limit_conformity_what(
    const GramOperators& g, const std::function<Vec2(const Vec2&)>& phi,
    const std::function<double(const Vec2&)>& div_phi) {
  const Eigen::VectorXd r =
      assemble_defect(g.hd(), [&](const Vec2& x) {
        DefectData d;
        d.f = div_phi(x);
        d.v = phi(x);
        return d;
      });
  return g.riesz_hess(r);
}

std::function<Mat2(const Vec2&)> test_xi() {
  return [](const Vec2& x) {
    const double s = std::sin(M_PI * x.x()) * std::sin(M_PI * x.y());
    const double q = x.x() * x.x() * x.y() * (1. - x.x());
    Mat2 m;
    m << s, q, q, s;
    return m;
  };
}

std::function<double(const Vec2&)> test_div_div_xi() {
  return [](const Vec2& x) {
    const double s = std::sin(M_PI * x.x()) * std::sin(M_PI * x.y());
    return -2. * M_PI * M_PI * s + 2. * (2. * x.x() - 3. * x.x() * x.x());
  };
}

std::function<Vec2(const Vec2&)> test_phi() {
  return [](const Vec2& x) {
    return Vec2(std::sin(M_PI * x.x()) * std::sin(M_PI * x.y()),
                x.x() * x.y() * (1. - x.x()) * (1. - x.y()));
  };
}

std::function<double(const Vec2&)> test_div_phi() {
  return [](const Vec2& x) {
    return M_PI * std::cos(M_PI * x.x()) * std::sin(M_PI * x.y()) +
           x.x() * (1. - x.x()) * (1. - 2. * x.y());
  };
}

namespace {

/// Point evaluator behind pi_field. For the gradient-recovery element the dG
/// gradient is the broken gradient of the P1 reconstruction itself, which is
/// constant per cell; it is rebuilt from the vertex traces and cached.
struct PiEval {
  const HessianDiscretisation* hd = nullptr;
  DiscreteField f;
  std::vector<Vec2> pt = std::vector<Vec2>(1);
  std::vector<FieldValues> val;
  std::vector<char> have_grad;
  std::vector<Vec2> cell_grad;

  double value(int cell, const Vec2& x) {
    pt[0] = x;
    reconstruct(*hd, f, cell, pt, val);
    return val[0].pi;
  }

  Vec2 grad(int cell, const Vec2& x) {
    if (hd->kind() != ElementKind::Gr) {
      pt[0] = x;
      reconstruct(*hd, f, cell, pt, val);
      return val[0].grad;
    }
    if (have_grad.empty()) {
      have_grad.assign(hd->n_cells(), 0);
      cell_grad.assign(hd->n_cells(), Vec2::Zero());
    }
    if (!have_grad[cell]) {
      const Mesh& m = hd->mesh();
      double tv[3];
      for (int i = 0; i < 3; i++) tv[i] = value(cell, m.cell_vertex(cell, i));
      Mat2 j;
      j.col(0) = m.cell_vertex(cell, 1) - m.cell_vertex(cell, 0);
      j.col(1) = m.cell_vertex(cell, 2) - m.cell_vertex(cell, 0);
      cell_grad[cell] =
          j.transpose().inverse() * Vec2(tv[1] - tv[0], tv[2] - tv[0]);
      have_grad[cell] = 1;
    }
    return cell_grad[cell];
  }
};

}  // namespace

BrokenField pi_field(const HessianDiscretisation& hd, const DiscreteField& f,
                     int comp) {
  auto ev = std::make_shared<PiEval>();
  ev->hd = &hd;
  ev->f.k = 1;
  ev->f.coeffs = f.coeffs.col(comp);
  BrokenField w;
  switch (hd.kind()) {
    case ElementKind::Morley: w.degree = 2; break;
    case ElementKind::Adini: w.degree = 4; break;
    case ElementKind::Gr: w.degree = 1; break;
  }
  w.value = [ev](int c, const Vec2& x) { return ev->value(c, x); };
  w.grad = [ev](int c, const Vec2& x) { return ev->grad(c, x); };
  return w;
}

double dg_norm(const Mesh& mesh, const BrokenField& w) {
  double acc = 0.;
  const QuadRule& rule = rule_for(mesh.cell_kind, std::max(2, 2 * w.degree));
  std::vector<Vec2> pts;
  std::vector<double> wts;
  for (int c = 0; c < mesh.n_cells(); c++) {
    map_rule_to_cell(mesh, c, rule, pts, wts);
    for (std::size_t q = 0; q < pts.size(); q++)
      acc += wts[q] * w.grad(c, pts[q]).squaredNorm();
  }

  // Four-point Gauss on [0,1], exact through degree 7: enough for the square
  // of every trace the three elements produce. The h_e^-1 jump scaling
  // cancels the arclength Jacobian, so the weights apply directly.
  static const double gx[4] = {0.06943184420297371, 0.33000947820757187,
                               0.6699905217924281, 0.9305681557970262};
  static const double gw[4] = {0.17392742256872692, 0.3260725774312731,
                               0.3260725774312731, 0.17392742256872692};
  for (const Edge& e : mesh.edges) {
    const Vec2 a = mesh.vertex(e.v[0]);
    const Vec2 b = mesh.vertex(e.v[1]);
    for (int t = 0; t < 4; t++) {
      const Vec2 x = a + gx[t] * (b - a);
      const double jump =
          w.value(e.cells[0], x) - (e.boundary ? 0. : w.value(e.cells[1], x));
      acc += gw[t] * jump * jump;
    }
  }
  return std::sqrt(acc);
}

double gr_max_stabilisation(const HessianDiscretisation& hd) {
  if (hd.kind() != ElementKind::Gr) return 0.;
  const GrMethod& gr = hd.gr();
  const Mesh& m = hd.mesh();
  double mx = 0.;
  for (int c = 0; c < m.n_cells(); c++) {
    const Vec2 t0 = m.cell_vertex(c, 0);
    const Vec2 t1 = m.cell_vertex(c, 1);
    const Vec2 t2 = m.cell_vertex(c, 2);
    const Vec2 centres[4] = {(2. * t0 + 0.5 * (t1 + t2)) / 3.,
                             (2. * t1 + 0.5 * (t0 + t2)) / 3.,
                             (2. * t2 + 0.5 * (t0 + t1)) / 3.,
                             (t0 + t1 + t2) / 3.};
    for (const Vec2& x : centres)
      mx = std::max(mx, gr.stabilisation(c, x).norm());
  }
  return mx;
}

StabilityBound stability_bound_check(const GramOperators& g,
                                     const ProblemSpec& p,
                                     const DiscreteField& psi, double cd_l2) {
  const HessianDiscretisation& hd = g.hd();
  const int n = hd.n_dofs();
  StabilityBound out;
  out.lhs = hd_norm(hd, psi);
  const Eigen::VectorXd load = assemble_load(hd, p);
  double ln2 = 0.;
  for (int c = 0; c < p.k; c++) {
    const double rc = g.riesz_pi(load.segment(c * n, n));
    ln2 += rc * rc;
  }
  out.load_norm = std::sqrt(ln2);
  if (cd_l2 > 0.) {
    out.cd_l2 = cd_l2;
  } else {
    CoercivityOptions opts;
    opts.l4_samples = 0;
    out.cd_l2 = coercivity_constant(g, opts).l2_part;
  }
  out.rhs = out.cd_l2 * out.load_norm / p.alpha_bar;
  out.holds = out.lhs <= out.rhs * (1. + 1e-10);
  return out;
}

DiagnosticsRow diagnostics_row(const HessianDiscretisation& hd,
                               const ProblemSpec& p, const DiscreteField& psi) {
  GramOperators g(hd);
  const CoercivityConstants cc = coercivity_constant(g);
  DiagnosticsRow row;
  row.h = hd.mesh().h;
  row.cd_l2 = cc.l2_part;
  row.cd_l4 = cc.l4_part;
  for (const ExactComponent& phi : p.exact)
    row.sd.push_back(consistency_upper(hd, phi));
  row.wd = limit_conformity_w(g, test_xi(), test_div_div_xi());
  row.what = limit_conformity_what(g, test_phi(), test_div_phi());

  std::mt19937 rng(0x5bd1e995u + static_cast<unsigned>(hd.n_dofs()));
  std::normal_distribution<double> dist;
  DiscreteField f;
  f.k = 1;
  f.coeffs.resize(hd.n_dofs(), 1);
  for (int i = 0; i < hd.n_dofs(); i++) f.coeffs(i, 0) = dist(rng);
  const double dn = hd_norm(hd, f);
  row.dg_ratio = dn > 0. ? dg_norm(hd.mesh(), pi_field(hd, f)) / dn : 0.;

  row.gr_max_s = gr_max_stabilisation(hd);
  const StabilityBound sb = stability_bound_check(g, p, psi, cc.l2_part);
  row.stab_lhs = sb.lhs;
  row.stab_rhs = sb.rhs;
  return row;
}

}  // namespace hdm
