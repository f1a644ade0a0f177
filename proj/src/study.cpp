#include "hdm/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "hdm/diagnostics.hpp"

namespace hdm {

namespace {

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

}  // namespace

const char* problem_name(ProblemSpec::Kind k) {
  return k == ProblemSpec::Kind::NavierStokes ? "ns" : "vk";
}

const char* domain_name(DomainKind d) {
  return d == DomainKind::UnitSquare ? "square" : "lshape";
}

const char* pattern_name(MeshPattern p) {
  switch (p) {
    case MeshPattern::Diagonal: return "diagonal";
    case MeshPattern::CrissCross: return "crisscross";
    case MeshPattern::Rectangles: return "rectangles";
  }
  return "?";
}

const char* start_name(StartPolicy s) {
  return s == StartPolicy::Zero ? "zero" : "coarse";
}

ProblemSpec::Kind parse_problem(const std::string& s) {
  if (s == "ns") return ProblemSpec::Kind::NavierStokes;
  if (s == "vk") return ProblemSpec::Kind::VonKarman;
  throw std::runtime_error("unknown problem \"" + s + "\" (ns, vk)");
}

ElementKind parse_element(const std::string& s) {
  if (s == "morley") return ElementKind::Morley;
  if (s == "adini") return ElementKind::Adini;
  if (s == "gr") return ElementKind::Gr;
  throw std::runtime_error("unknown method \"" + s + "\" (morley, adini, gr)");
}

DomainKind parse_domain(const std::string& s) {
  if (s == "square") return DomainKind::UnitSquare;
  if (s == "lshape") return DomainKind::LShape;
  throw std::runtime_error("unknown domain \"" + s + "\" (square, lshape)");
}

MeshPattern parse_pattern(const std::string& s) {
  if (s == "diagonal") return MeshPattern::Diagonal;
  if (s == "crisscross") return MeshPattern::CrissCross;
  if (s == "rectangles") return MeshPattern::Rectangles;
  throw std::runtime_error("unknown pattern \"" + s +
                           "\" (diagonal, crisscross, rectangles)");
}

StartPolicy parse_start(const std::string& s) {
  if (s == "zero") return StartPolicy::Zero;
  if (s == "coarse") return StartPolicy::CoarseInterpolation;
  throw std::runtime_error("unknown start policy \"" + s + "\" (zero, coarse)");
}

MeshPattern study_pattern(const StudyConfig& cfg) {
  if (cfg.pattern) return *cfg.pattern;
  if (cfg.method == ElementKind::Adini) return MeshPattern::Rectangles;
  if (cfg.domain == DomainKind::LShape) return MeshPattern::Diagonal;
  if (cfg.method == ElementKind::Gr) return MeshPattern::Diagonal;
  return MeshPattern::CrissCross;
}

void validate_config(const StudyConfig& cfg) {
  if (cfg.levels < 2) throw std::runtime_error("levels must be >= 2");
  if (cfg.nu <= 0.) throw std::runtime_error("nu must be positive");
  const MeshPattern pattern = study_pattern(cfg);
  const bool rect = pattern == MeshPattern::Rectangles;
  if (cfg.method == ElementKind::Adini && !rect)
    throw std::runtime_error("adini requires the rectangles pattern");
  if (cfg.method != ElementKind::Adini && rect)
    throw std::runtime_error("pattern rectangles requires method adini");
  if (rect && cfg.domain != DomainKind::UnitSquare)
    throw std::runtime_error("pattern rectangles requires the square domain");
  if (cfg.domain == DomainKind::LShape &&
      cfg.problem != ProblemSpec::Kind::VonKarman)
    throw std::runtime_error("the lshape benchmark exists only for vk");
}

Mesh coarsest_mesh(DomainKind domain, MeshPattern pattern) {
  if (domain == DomainKind::LShape)
    return build_structured_mesh(domain, pattern, 2);
  switch (pattern) {
    case MeshPattern::CrissCross: return build_structured_mesh(domain, pattern, 1);
    case MeshPattern::Diagonal: return build_structured_mesh(domain, pattern, 4);
    case MeshPattern::Rectangles: return build_structured_mesh(domain, pattern, 2);
  }
  throw std::runtime_error("bad pattern");
}

ProblemSpec study_problem(const StudyConfig& cfg) {
  if (cfg.problem == ProblemSpec::Kind::NavierStokes)
    return manufactured_square_ns(cfg.nu);
  return cfg.domain == DomainKind::UnitSquare ? manufactured_square_vk()
                                              : manufactured_lshape_vk();
}

std::vector<ErrorTriple> compute_errors(const HessianDiscretisation& hd,
                                        const DiscreteField& sol,
                                        const ExactBundle& exact, int degree) {
  const Mesh& m = hd.mesh();
  const int k = sol.k;
  if (static_cast<int>(exact.size()) != k)
    throw std::runtime_error("exact bundle size mismatch");
  const int base_splits = hd.kind() == ElementKind::Gr ? 1 : 0;
  // A vertex left of x = 0 marks the L-shaped domain; there the cells at the
  // re-entrant corner see the r^{1+gamma} singularity and get one more split.
  bool reentrant = false;
  for (const Vec2& v : m.vertices)
    if (v.x() < -1e-12) { reentrant = true; break; }

  std::vector<double> num(3 * k, 0.), den(3 * k, 0.);
  std::vector<Vec2> pts;
  std::vector<double> wts;
  std::vector<FieldValues> vals;
  for (int c = 0; c < hd.n_cells(); c++) {
    int splits = base_splits;
    if (reentrant)
      for (int i = 0; i < m.cell_nv(c); i++)
        if (m.cell_vertex(c, i).norm() < 1e-12) { splits++; break; }
    hd.refined_quadrature(c, degree, splits, pts, wts);
    reconstruct(hd, sol, c, pts, vals);
    for (std::size_t q = 0; q < pts.size(); q++) {
      const double w = wts[q];
      for (int comp = 0; comp < k; comp++) {
        const FieldValues& fv = vals[q * k + comp];
        const double ev = exact[comp].value(pts[q]);
        const Vec2 eg = exact[comp].grad(pts[q]);
        const Mat2 eh = exact[comp].hess(pts[q]);
        num[3 * comp + 0] += w * (fv.pi - ev) * (fv.pi - ev);
        den[3 * comp + 0] += w * ev * ev;
        num[3 * comp + 1] += w * (fv.grad - eg).squaredNorm();
        den[3 * comp + 1] += w * eg.squaredNorm();
        num[3 * comp + 2] += w * (fv.hess - eh).squaredNorm();
        den[3 * comp + 2] += w * eh.squaredNorm();
      }
    }
  }
  std::vector<ErrorTriple> out(k);
  for (int comp = 0; comp < k; comp++) {
    // zero-norm exact component: report the absolute error
    const auto rel = [&](int slot) {
      const double d = den[3 * comp + slot];
      return std::sqrt(num[3 * comp + slot] / (d > 0. ? d : 1.));
    };
    out[comp] = {rel(0), rel(1), rel(2)};
  }
  return out;
}

std::vector<double> observed_order(const std::vector<double>& errs,
                                   const std::vector<double>& hs) {
  if (errs.size() != hs.size() || errs.size() < 2)
    throw std::runtime_error("observed_order needs matching lists of >= 2");
  std::vector<double> out;
  out.reserve(errs.size() - 1);
  for (std::size_t i = 1; i < errs.size(); i++) {
    if (errs[i] <= 0. || errs[i - 1] <= 0.)
      throw std::runtime_error("observed_order needs positive errors");
    if (hs[i] >= hs[i - 1])
      throw std::runtime_error("observed_order needs decreasing h");
    out.push_back(std::log(errs[i - 1] / errs[i]) / std::log(hs[i - 1] / hs[i]));
  }
  return out;
}

DiscreteField inject_coarse(const HessianDiscretisation& fine,
                            const HessianDiscretisation& coarse,
                            const DiscreteField& coarse_field) {
  const Mesh& fm = fine.mesh();
  if (fine.n_cells() != 4 * coarse.n_cells())
    throw std::runtime_error("inject_coarse expects one red refinement");
  const int k = coarse_field.k;
  DiscreteField out = zero_field(fine, k);
  std::vector<Vec2> nodes;
  std::vector<FieldValues> vals;
  for (int f = 0; f < fine.n_cells(); f++) {
    const int parent = f / 4;
    const std::vector<int>& dofs = fine.cell_dofs(f);
    nodes.clear();
    for (int i = 0; i < fm.cell_nv(f); i++) nodes.push_back(fm.cell_vertex(f, i));
    switch (fine.kind()) {
      case ElementKind::Morley: {
        for (int e = 0; e < 3; e++)
          nodes.push_back(fm.edges[fm.cell_edges[f][e]].midpoint);
        reconstruct(coarse, coarse_field, parent, nodes, vals);
        for (int i = 0; i < 3; i++)
          if (dofs[i] >= 0)
            for (int c = 0; c < k; c++)
              out.coeffs(dofs[i], c) = vals[i * k + c].pi;
        for (int e = 0; e < 3; e++) {
          if (dofs[3 + e] < 0) continue;
          const Vec2& n = fm.edges[fm.cell_edges[f][e]].normal;
          for (int c = 0; c < k; c++)
            out.coeffs(dofs[3 + e], c) = vals[(3 + e) * k + c].grad.dot(n);
        }
        break;
      }
      case ElementKind::Adini: {
        reconstruct(coarse, coarse_field, parent, nodes, vals);
        for (int i = 0; i < 4; i++) {
          if (dofs[3 * i] < 0) continue;
          for (int c = 0; c < k; c++) {
            out.coeffs(dofs[3 * i + 0], c) = vals[i * k + c].pi;
            out.coeffs(dofs[3 * i + 1], c) = vals[i * k + c].grad.x();
            out.coeffs(dofs[3 * i + 2], c) = vals[i * k + c].grad.y();
          }
        }
        break;
      }
      case ElementKind::Gr: {
        reconstruct(coarse, coarse_field, parent, nodes, vals);
        const std::vector<int>& dv = fine.gr().cells[f].dof_vertices;
        for (int i = 0; i < 3; i++) {
          const int v = fm.cells[f][i];
          const auto it = std::lower_bound(dv.begin(), dv.end(), v);
          if (it == dv.end() || *it != v) continue;
          const int a = static_cast<int>(it - dv.begin());
          for (int c = 0; c < k; c++)
            out.coeffs(dofs[a], c) = vals[i * k + c].pi;
        }
        break;
      }
    }
  }
  return out;
}

ConvergenceReport run_convergence_study(const StudyConfig& cfg) {
  validate_config(cfg);
  const MeshPattern pattern = study_pattern(cfg);
  const ProblemSpec problem = study_problem(cfg);

  std::vector<Mesh> meshes;
  meshes.reserve(cfg.levels);
  meshes.push_back(coarsest_mesh(cfg.domain, pattern));
  for (int l = 1; l < cfg.levels; l++) meshes.push_back(red_refine(meshes.back()));

  ConvergenceReport rep;
  rep.cfg = cfg;
  rep.k = problem.k;
  NewtonOptions opts = cfg.newton;
  if (cfg.quad_degree > 0) opts.form_degree = cfg.quad_degree;

  std::vector<DiagnosticsRow> diag;
  std::unique_ptr<HessianDiscretisation> prev;
  DiscreteField prev_sol;
  for (int l = 0; l < cfg.levels; l++) {
    auto hd = std::make_unique<HessianDiscretisation>(meshes[l], cfg.method);
    DiscreteField warm;
    const DiscreteField* init = nullptr;
    if (cfg.start == StartPolicy::CoarseInterpolation && prev) {
      warm = inject_coarse(*hd, *prev, prev_sol);
      init = &warm;
    }
    SolveReport sr = newton_solve(*hd, problem, opts, init);
    if (!sr.converged)
      throw std::runtime_error("newton did not converge on level " +
                               std::to_string(l + 1) + " (residual " +
                               fmt("%.3e", sr.residual_norm) + ")");
    LevelRow row;
    row.h = meshes[l].h;
    row.n_unknowns = hd->n_dofs();
    row.err = compute_errors(*hd, sr.psi, problem.exact);
    row.newton_iterations = sr.iterations;
    row.newton_residual = sr.residual_norm;
    rep.rows.push_back(std::move(row));
    if (cfg.diagnostics) diag.push_back(diagnostics_row(*hd, problem, sr.psi));
    prev_sol = std::move(sr.psi);
    prev = std::move(hd);
  }

  if (cfg.diagnostics) {
    std::ostringstream hdr;
    hdr << "h,cd_l2,cd_l4";
    for (int c = 0; c < rep.k; c++) hdr << ",sd_" << (c == 0 ? "u" : "v");
    hdr << ",wd,what,dg_ratio,gr_max_s,stab_lhs,stab_rhs";
    rep.diagnostics_lines.push_back("diagnostics");
    rep.diagnostics_lines.push_back(
        "fields: xi=[[s,q],[q,s]] phi=(s, x y (1-x)(1-y)) with "
        "s=sin(pi x) sin(pi y), q=x^2 y (1-x)");
    rep.diagnostics_lines.push_back(hdr.str());
    for (const DiagnosticsRow& d : diag) {
      std::ostringstream ln;
      ln << fmt("%.6g", d.h) << "," << fmt("%.6g", d.cd_l2) << ","
         << fmt("%.6g", d.cd_l4);
      for (double s : d.sd) ln << "," << fmt("%.6g", s);
      ln << "," << fmt("%.6g", d.wd) << "," << fmt("%.6g", d.what) << ","
         << fmt("%.6g", d.dg_ratio) << "," << fmt("%.6g", d.gr_max_s) << ","
         << fmt("%.6g", d.stab_lhs) << "," << fmt("%.6g", d.stab_rhs);
      rep.diagnostics_lines.push_back(ln.str());
    }
  }

  std::vector<double> hs;
  for (const LevelRow& r : rep.rows) hs.push_back(r.h);
  for (std::size_t i = 1; i < rep.rows.size(); i++)
    rep.rows[i].order.resize(rep.k);
  for (int comp = 0; comp < rep.k; comp++) {
    std::vector<double> e2, eg, eh;
    for (const LevelRow& r : rep.rows) {
      e2.push_back(r.err[comp].l2);
      eg.push_back(r.err[comp].grad);
      eh.push_back(r.err[comp].hess);
    }
    const std::vector<double> o2 = observed_order(e2, hs);
    const std::vector<double> og = observed_order(eg, hs);
    const std::vector<double> oh = observed_order(eh, hs);
    for (std::size_t i = 1; i < rep.rows.size(); i++)
      rep.rows[i].order[comp] = {o2[i - 1], og[i - 1], oh[i - 1]};
  }
  return rep;
}

void write_csv(const ConvergenceReport& rep, std::ostream& out) {
  std::ostringstream cfgtxt;
  write_config(rep.cfg, cfgtxt);
  std::istringstream lines(cfgtxt.str());
  std::string line;
  while (std::getline(lines, line)) out << "# " << line << "\n";
  for (std::size_t i = 0; i < rep.rows.size(); i++)
    out << "# level " << i + 1
        << ": newton_iterations=" << rep.rows[i].newton_iterations
        << " final_residual=" << fmt("%.3e", rep.rows[i].newton_residual)
        << "\n";

  out << "h,nu";
  for (int comp = 0; comp < rep.k; comp++) {
    const char* nm = comp == 0 ? "u" : "v";
    out << ",err_" << nm << ",ord_" << nm << ",err_grad_" << nm << ",ord_grad_"
        << nm << ",err_hess_" << nm << ",ord_hess_" << nm;
  }
  out << "\n";
  for (std::size_t i = 0; i < rep.rows.size(); i++) {
    const LevelRow& r = rep.rows[i];
    out << fmt("%.6g", r.h) << "," << r.n_unknowns;
    for (int comp = 0; comp < rep.k; comp++) {
      const ErrorTriple& e = r.err[comp];
      const double vals[3] = {e.l2, e.grad, e.hess};
      for (int slot = 0; slot < 3; slot++) {
        out << "," << fmt("%.6g", vals[slot]) << ",";
        if (i == 0) {
          out << "-";
        } else {
          const ErrorTriple& o = r.order[comp];
          const double ords[3] = {o.l2, o.grad, o.hess};
          out << fmt("%.4f", ords[slot]);
        }
      }
    }
    out << "\n";
  }
  for (const std::string& s : rep.diagnostics_lines) out << "# " << s << "\n";
}

void write_csv_file(const ConvergenceReport& rep, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(rep, f);
}

void write_config(const StudyConfig& cfg, std::ostream& out) {
  out << "problem=" << problem_name(cfg.problem) << "\n";
  out << "method=" << element_name(cfg.method) << "\n";
  out << "domain=" << domain_name(cfg.domain) << "\n";
  if (cfg.pattern) out << "pattern=" << pattern_name(*cfg.pattern) << "\n";
  out << "levels=" << cfg.levels << "\n";
  out << "nu=" << fmt("%.17g", cfg.nu) << "\n";
  out << "quad_degree=" << cfg.quad_degree << "\n";
  out << "newton_tol=" << fmt("%.17g", cfg.newton.tol) << "\n";
  out << "newton_rel_tol=" << fmt("%.17g", cfg.newton.rel_tol) << "\n";
  out << "newton_max_iters=" << cfg.newton.max_iters << "\n";
  out << "start=" << start_name(cfg.start) << "\n";
  out << "diagnostics=" << (cfg.diagnostics ? 1 : 0) << "\n";
  if (!cfg.out.empty()) out << "out=" << cfg.out << "\n";
}

namespace {

std::string trimmed(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

StudyConfig read_config(std::istream& in) {
  StudyConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    const std::string t = trimmed(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected key=value, got \"" + t + "\"");
    const std::string key = trimmed(t.substr(0, eq));
    const std::string val = trimmed(t.substr(eq + 1));
    if (key == "problem") cfg.problem = parse_problem(val);
    else if (key == "method") cfg.method = parse_element(val);
    else if (key == "domain") cfg.domain = parse_domain(val);
    else if (key == "pattern") cfg.pattern = parse_pattern(val);
    else if (key == "levels") cfg.levels = std::stoi(val);
    else if (key == "nu") cfg.nu = std::stod(val);
    else if (key == "quad_degree") cfg.quad_degree = std::stoi(val);
    else if (key == "newton_tol") cfg.newton.tol = std::stod(val);
    else if (key == "newton_rel_tol") cfg.newton.rel_tol = std::stod(val);
    else if (key == "newton_max_iters") cfg.newton.max_iters = std::stoi(val);
    else if (key == "start") cfg.start = parse_start(val);
    else if (key == "diagnostics") cfg.diagnostics = std::stoi(val) != 0;
    else if (key == "out") cfg.out = val;
    else
      throw std::runtime_error("unknown config key \"" + key + "\"");
  }
  return cfg;
}

StudyConfig read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return read_config(f);
}

}  // namespace hdm
