#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hdm/study.hpp"
#include "hdm/verify.hpp"

namespace {

struct StudyFlags {
  std::string problem, method, domain, pattern, start, out, config_path;
  int levels = 0, newton_max = 0, quad_degree = 0;
  double nu = 0., newton_tol = 0.;
  bool diagnostics = false;
};

void add_study_options(CLI::App* cmd, StudyFlags& o, bool with_diag_flag) {
  cmd->add_option("--config", o.config_path,
                  "Config file; flags override its values");
  cmd->add_option("--problem", o.problem, "ns | vk");
  cmd->add_option("--method", o.method, "morley | adini | gr");
  cmd->add_option("--domain", o.domain, "square | lshape");
  cmd->add_option("--pattern", o.pattern, "diagonal | crisscross | rectangles");
  cmd->add_option("--levels", o.levels, "Number of refinement levels (>= 2)");
  cmd->add_option("--nu", o.nu, "Viscosity (ns only)");
  cmd->add_option("--newton-tol", o.newton_tol, "Newton residual tolerance");
  cmd->add_option("--newton-max-iters", o.newton_max, "Newton iteration cap");
  cmd->add_option("--quad-degree", o.quad_degree, "Quadrature degree override");
  cmd->add_option("--start", o.start, "zero | coarse (initial guess policy)");
  if (with_diag_flag)
    cmd->add_flag("--diagnostics", o.diagnostics,
                  "Append the diagnostics block");
  cmd->add_option("--out", o.out, "Output CSV path");
}

hdm::StudyConfig build_config(const CLI::App* cmd, const StudyFlags& o) {
  hdm::StudyConfig cfg;
  if (!o.config_path.empty()) cfg = hdm::read_config_file(o.config_path);
  if (cmd->count("--problem")) cfg.problem = hdm::parse_problem(o.problem);
  if (cmd->count("--method")) cfg.method = hdm::parse_element(o.method);
  if (cmd->count("--domain")) cfg.domain = hdm::parse_domain(o.domain);
  if (cmd->count("--pattern")) cfg.pattern = hdm::parse_pattern(o.pattern);
  if (cmd->count("--levels")) cfg.levels = o.levels;
  if (cmd->count("--nu")) cfg.nu = o.nu;
  if (cmd->count("--newton-tol")) cfg.newton.tol = o.newton_tol;
  if (cmd->count("--newton-max-iters")) cfg.newton.max_iters = o.newton_max;
  if (cmd->count("--quad-degree")) cfg.quad_degree = o.quad_degree;
  if (cmd->count("--start")) cfg.start = hdm::parse_start(o.start);
  if (cmd->get_option_no_throw("--diagnostics") && cmd->count("--diagnostics"))
    cfg.diagnostics = o.diagnostics;
  if (cmd->count("--out")) cfg.out = o.out;
  return cfg;
}

int run_study(const hdm::StudyConfig& cfg) {
  hdm::ConvergenceReport rep = hdm::run_convergence_study(cfg);
  hdm::write_csv_file(rep, cfg.out);
  hdm::write_csv(rep, std::cout);
  return 0;
}

int run_diagnose(hdm::StudyConfig cfg) {
  cfg.diagnostics = true;
  hdm::ConvergenceReport rep = hdm::run_convergence_study(cfg);
  std::ostringstream txt;
  std::ostringstream cfgtxt;
  hdm::write_config(cfg, cfgtxt);
  std::istringstream lines(cfgtxt.str());
  std::string line;
  while (std::getline(lines, line)) txt << "# " << line << "\n";
  // diagnostics_lines[0] is the block marker; the table follows
  for (std::size_t i = 1; i < rep.diagnostics_lines.size(); i++)
    txt << rep.diagnostics_lines[i] << "\n";
  std::cout << txt.str();
  if (!cfg.out.empty()) {
    std::ofstream f(cfg.out);
    if (!f) throw std::runtime_error("cannot open " + cfg.out + " for writing");
    f << txt.str();
  }
  return 0;
}

int run_verify_tables(const std::string& out_dir) {
  bool all_pass = true;
  for (const hdm::VerifyResult& r : hdm::verify_all_baselines()) {
    std::printf("%-18s %s  (%.1f s)\n", r.name.c_str(),
                r.pass ? "PASS" : "FAIL", r.seconds);
    for (const std::string& f : r.failures)
      std::printf("    - %s\n", f.c_str());
    if (!out_dir.empty())
      hdm::write_csv_file(r.report, out_dir + "/" + r.name + ".csv");
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hessian discretisation studies for fourth order problems"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a convergence study");
  StudyFlags run_flags;
  add_study_options(run, run_flags, /*with_diag_flag=*/true);

  auto* diagnose = app.add_subcommand(
      "diagnose", "Run a study and report only the diagnostics table");
  StudyFlags diag_flags;
  add_study_options(diagnose, diag_flags, /*with_diag_flag=*/false);

  auto* verify = app.add_subcommand("verify-tables",
                                    "Check the five baseline studies against "
                                    "the frozen reference tables");
  std::string out_dir;
  verify->add_option("--out-dir", out_dir, "Also write each study's CSV here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      hdm::StudyConfig cfg = build_config(run, run_flags);
      if (cfg.out.empty())
        throw std::runtime_error("no output path (--out or config out=)");
      return run_study(cfg);
    }
    if (diagnose->parsed()) return run_diagnose(build_config(diagnose, diag_flags));
    if (verify->parsed()) return run_verify_tables(out_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
