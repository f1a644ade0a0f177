#include "hdm/solver.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hdm {

SystemMatrix::SystemMatrix(const HessianDiscretisation& hd, int k) {
  const int n = hd.n_dofs();

  std::vector<std::vector<int>> dof_cells(n);
  for (int c = 0; c < hd.n_cells(); c++)
    for (int d : hd.cell_dofs(c))
      if (d >= 0) dof_cells[d].push_back(c);

  // Scalar coupling: dofs sharing at least one cell.
  std::vector<std::vector<int>> cols(n);
  for (int i = 0; i < n; i++) {
    std::vector<int>& ci = cols[i];
    for (int c : dof_cells[i])
      for (int d : hd.cell_dofs(c))
        if (d >= 0) ci.push_back(d);
    std::sort(ci.begin(), ci.end());
    ci.erase(std::unique(ci.begin(), ci.end()), ci.end());
  }

  mat_.resize(k * n, k * n);
  Eigen::VectorXi per_col(k * n);
  for (int bc = 0; bc < k; bc++)
    for (int i = 0; i < n; i++)
      per_col[bc * n + i] = k * static_cast<int>(cols[i].size());
  mat_.reserve(per_col);
  for (int bc = 0; bc < k; bc++)
    for (int i = 0; i < n; i++)
      for (int br = 0; br < k; br++)
        for (int j : cols[i]) mat_.insert(br * n + j, bc * n + i) = 0.;
  mat_.makeCompressed();
}

void SystemMatrix::set_zero() {
  double* v = mat_.valuePtr();
  std::fill(v, v + mat_.nonZeros(), 0.);
}

double& SystemMatrix::coeff(int row, int col) {
  const int* outer = mat_.outerIndexPtr();
  const int* inner = mat_.innerIndexPtr();
  const int* lo = inner + outer[col];
  const int* hi = inner + outer[col + 1];
  const int* it = std::lower_bound(lo, hi, row);
  return mat_.valuePtr()[it - inner];
}

Eigen::VectorXd field_to_vector(const DiscreteField& f) {
  return Eigen::Map<const Eigen::VectorXd>(f.coeffs.data(),
                                           f.coeffs.size());
}

DiscreteField vector_to_field(const HessianDiscretisation& hd, int k,
                              const Eigen::VectorXd& x) {
  DiscreteField f;
  f.k = k;
  f.coeffs = Eigen::Map<const Eigen::MatrixXd>(x.data(), hd.n_dofs(), k);
  return f;
}

Eigen::VectorXd assemble_load(const HessianDiscretisation& hd,
                              const ProblemSpec& p, int degree) {
  const int n = hd.n_dofs();
  Eigen::VectorXd load = Eigen::VectorXd::Zero(p.k * n);
  std::vector<Vec2> pts;
  std::vector<double> wts;
  LocalTable tab;
  for (int c = 0; c < hd.n_cells(); c++) {
    hd.cell_quadrature(c, degree, pts, wts, /*subdivide=*/false);
    hd.tabulate(c, pts, tab);
    const std::vector<int>& dofs = hd.cell_dofs(c);
    for (std::size_t q = 0; q < pts.size(); q++) {
      for (int comp = 0; comp < p.k; comp++) {
        const double fw = wts[q] * p.load_weight(comp) * p.load[comp](pts[q]);
        for (int j = 0; j < tab.nloc; j++)
          if (dofs[j] >= 0)
            load[comp * n + dofs[j]] += fw * tab.pi[q * tab.nloc + j];
      }
    }
  }
  return load;
}

Eigen::VectorXd assemble_residual(const HessianDiscretisation& hd,
                                  const ProblemSpec& p,
                                  const DiscreteField& psi,
                                  const Eigen::VectorXd& load, int degree) {
  const int form_deg = degree > 0 ? degree : hd.form_degree();
  const int n = hd.n_dofs();
  Eigen::VectorXd r = -load;
  std::vector<Vec2> pts;
  std::vector<double> wts;
  LocalTable tab;
  std::vector<FieldValues> state;
  std::vector<Mat2> lam(p.k), gam(p.k, Mat2::Zero());
  std::vector<Vec2> xi(p.k), th(p.k, Vec2::Zero());
  for (int c = 0; c < hd.n_cells(); c++) {
    hd.cell_quadrature(c, form_deg, pts, wts);
    hd.tabulate(c, pts, tab);
    const std::vector<int>& dofs = hd.cell_dofs(c);
    state.assign(pts.size() * p.k, FieldValues{});
    for (std::size_t q = 0; q < pts.size(); q++)
      for (int j = 0; j < tab.nloc; j++) {
        if (dofs[j] < 0) continue;
        const int idx = static_cast<int>(q) * tab.nloc + j;
        for (int comp = 0; comp < p.k; comp++) {
          const double w = psi.coeffs(dofs[j], comp);
          state[q * p.k + comp].grad += w * tab.grad[idx];
          state[q * p.k + comp].hess += w * tab.hess[idx];
        }
      }
    for (std::size_t q = 0; q < pts.size(); q++) {
      for (int comp = 0; comp < p.k; comp++) {
        lam[comp] = state[q * p.k + comp].hess;
        xi[comp] = state[q * p.k + comp].grad;
      }
      for (int comp = 0; comp < p.k; comp++) {
        for (int j = 0; j < tab.nloc; j++) {
          if (dofs[j] < 0) continue;
          const int idx = static_cast<int>(q) * tab.nloc + j;
          gam[comp] = tab.hess[idx];
          th[comp] = tab.grad[idx];
          r[comp * n + dofs[j]] +=
              wts[q] * (p.a_density(lam.data(), gam.data()) +
                        p.b_density(lam.data(), xi.data(), th.data()));
          gam[comp] = Mat2::Zero();
          th[comp] = Vec2::Zero();
        }
      }
    }
  }
  return r;
}

void assemble_jacobian(const HessianDiscretisation& hd, const ProblemSpec& p,
                       const DiscreteField& psi, SystemMatrix& out,
                       bool freeze_hessian_slot, int degree) {
  const int form_deg = degree > 0 ? degree : hd.form_degree();
  const int n = hd.n_dofs();
  out.set_zero();
  std::vector<Vec2> pts;
  std::vector<double> wts;
  LocalTable tab;
  std::vector<FieldValues> state;
  Eigen::MatrixXd local;
  for (int c = 0; c < hd.n_cells(); c++) {
    hd.cell_quadrature(c, form_deg, pts, wts);
    hd.tabulate(c, pts, tab);
    const std::vector<int>& dofs = hd.cell_dofs(c);
    const int nloc = tab.nloc;
    reconstruct(hd, psi, c, pts, state);
    local.setZero(p.k * nloc, p.k * nloc);
    for (std::size_t q = 0; q < pts.size(); q++) {
      const double w = wts[q];
      const Mat2* Hq = &tab.hess[q * nloc];
      const Vec2* Gq = &tab.grad[q * nloc];
      if (p.kind == ProblemSpec::Kind::NavierStokes) {
        const Vec2 gs = state[q].grad;
        const double trs = state[q].hess.trace();
        for (int i = 0; i < nloc; i++) {
          const Vec2 rot_i(-Gq[i].y(), Gq[i].x());
          const double conv_i = gs.dot(rot_i);
          for (int j = 0; j < nloc; j++) {
            double v = p.nu * Hq[j].cwiseProduct(Hq[i]).sum();
            if (p.b_enabled) {
              if (!freeze_hessian_slot) v += Hq[j].trace() * conv_i;
              v += trs * Gq[j].dot(rot_i);
            }
            local(i, j) += w * v;
          }
        }
      } else {
        const Vec2 g1 = state[q * 2].grad, g2 = state[q * 2 + 1].grad;
        const Mat2 cs = cofactor2(state[q * 2].hess);
        for (int i = 0; i < nloc; i++) {
          for (int j = 0; j < nloc; j++) {
            const double hh = Hq[j].cwiseProduct(Hq[i]).sum();
            double b00 = 0., b01 = 0., b10 = 0.;
            if (p.b_enabled) {
              const Mat2 cj = cofactor2(Hq[j]);
              if (!freeze_hessian_slot) {
                b00 = (cj * Gq[i]).dot(g2);
                b10 = -(cj * g1).dot(Gq[i]);
              }
              b01 = (cs * Gq[i]).dot(Gq[j]);
              b10 += -(cs * Gq[j]).dot(Gq[i]);
            }
            local(i, j) += w * (hh + b00);
            local(i, nloc + j) += w * b01;
            local(nloc + i, j) += w * b10;
            local(nloc + i, nloc + j) += w * 2. * hh;
          }
        }
      }
    }
    for (int bc = 0; bc < p.k; bc++)
      for (int j = 0; j < nloc; j++) {
        if (dofs[j] < 0) continue;
        for (int br = 0; br < p.k; br++)
          for (int i = 0; i < nloc; i++) {
            if (dofs[i] < 0) continue;
            const double v = local(br * nloc + i, bc * nloc + j);
            if (v != 0.) out.coeff(br * n + dofs[i], bc * n + dofs[j]) += v;
          }
      }
  }
}

namespace {

Eigen::VectorXd sparse_solve(const Eigen::SparseMatrix<double>& a,
                             const Eigen::VectorXd& b) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("sparse factorisation failed");
  return lu.solve(b);
}

}  // namespace

SolveReport newton_solve(const HessianDiscretisation& hd, const ProblemSpec& p,
                         const NewtonOptions& opts,
                         const DiscreteField* initial) {
  SolveReport rep;
  rep.psi = initial ? *initial : zero_field(hd, p.k);
  const Eigen::VectorXd load = assemble_load(hd, p);
  Eigen::VectorXd x = field_to_vector(rep.psi);
  Eigen::VectorXd r = assemble_residual(hd, p, rep.psi, load, opts.form_degree);
  double rn = r.norm();
  rep.history.push_back(rn);
  const double target = std::max(opts.tol, opts.rel_tol * load.norm());
  SystemMatrix jac(hd, p.k);
  for (int it = 0; it < opts.max_iters && rn > target; it++) {
    assemble_jacobian(hd, p, rep.psi, jac, false, opts.form_degree);
    const Eigen::VectorXd step = sparse_solve(jac.matrix(), -r);
    double t = 1.;
    Eigen::VectorXd xt, rt;
    double rtn;
    while (true) {
      xt = x + t * step;
      rt = assemble_residual(hd, p, vector_to_field(hd, p.k, xt), load,
                             opts.form_degree);
      rtn = rt.norm();
      if (rtn < rn || t < 1. / 1024.) break;
      t *= 0.5;
    }
    if (rtn >= rn) break;  // at the floor of what the arithmetic allows
    x = xt;
    r = rt;
    rn = rtn;
    rep.psi = vector_to_field(hd, p.k, x);
    rep.iterations = it + 1;
    rep.history.push_back(rn);
  }
  rep.residual_norm = rn;
  rep.converged = rn <= target;
  return rep;
}

DiscreteField picard_step(const HessianDiscretisation& hd, const ProblemSpec& p,
                          const DiscreteField& current, int degree) {
  SystemMatrix op(hd, p.k);
  assemble_jacobian(hd, p, current, op, /*freeze_hessian_slot=*/true, degree);
  const Eigen::VectorXd load = assemble_load(hd, p);
  return vector_to_field(hd, p.k, sparse_solve(op.matrix(), load));
}

}  // namespace hdm
