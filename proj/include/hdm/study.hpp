#ifndef HDM_STUDY_HPP
#define HDM_STUDY_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hdm/hd.hpp"
#include "hdm/problems.hpp"
#include "hdm/solver.hpp"

namespace hdm {

enum class StartPolicy { Zero, CoarseInterpolation };

/// Everything a convergence run depends on. Reports echo the config so a run
/// can be reproduced from its output file alone.
struct StudyConfig {
  ProblemSpec::Kind problem = ProblemSpec::Kind::NavierStokes;
  ElementKind method = ElementKind::Morley;
  DomainKind domain = DomainKind::UnitSquare;
  std::optional<MeshPattern> pattern;  // defaulted from method and domain
  int levels = 6;
  double nu = 1.0;
  int quad_degree = 0;  // 0 = element default
  NewtonOptions newton;
  StartPolicy start = StartPolicy::Zero;
  bool diagnostics = false;
  std::string out;
};

/// Effective mesh pattern: the explicit choice, else rectangles for Adini,
/// diagonal on the L-shape and for the gradient-recovery method, criss-cross
/// for Morley on the square.
MeshPattern study_pattern(const StudyConfig& cfg);

/// Rejects configs outside the supported matrix: Adini needs rectangles,
/// rectangles need the square domain, the singular L-shape benchmark exists
/// only for the plate problem, levels >= 2, nu > 0.
void validate_config(const StudyConfig& cfg);

/// The coarsest structured mesh each family starts from.
Mesh coarsest_mesh(DomainKind domain, MeshPattern pattern);

struct ErrorTriple {
  double l2 = 0.;
  double grad = 0.;
  double hess = 0.;
};

/// Relative L2 errors of the three reconstructions against the exact bundle,
/// one triple per component. Cells touching the re-entrant corner and cells
/// of the gradient-recovery element get a finer, nested sub-rule.
std::vector<ErrorTriple> compute_errors(const HessianDiscretisation& hd,
                                        const DiscreteField& sol,
                                        const ExactBundle& exact,
                                        int degree = 12);

/// order_i = log(e_{i-1}/e_i) / log(h_{i-1}/h_i); one entry per step.
std::vector<double> observed_order(const std::vector<double>& errs,
                                   const std::vector<double>& hs);

struct LevelRow {
  double h = 0.;
  int n_unknowns = 0;  // the tables' "nu" column
  std::vector<ErrorTriple> err;    // per component
  std::vector<ErrorTriple> order;  // empty on the first level
  int newton_iterations = 0;
  double newton_residual = 0.;
};

struct ConvergenceReport {
  StudyConfig cfg;
  int k = 1;
  std::vector<LevelRow> rows;
  std::vector<std::string> diagnostics_lines;
};

/// Interpolates a coarse solution onto the once-red-refined discretisation
/// (child cells 4c..4c+3 of parent c) as a Newton starting guess.
DiscreteField inject_coarse(const HessianDiscretisation& fine,
                            const HessianDiscretisation& coarse,
                            const DiscreteField& coarse_field);

/// The manufactured problem a config refers to.
ProblemSpec study_problem(const StudyConfig& cfg);

/// Builds the red-refined mesh family, solves every level and fills the
/// report. Deterministic: a config yields byte-identical CSV output.
ConvergenceReport run_convergence_study(const StudyConfig& cfg);

/// CSV with '#' metadata lines (config echo, per-level solver trace), then a
/// header and one row per level. Errors carry 6 significant digits, orders 4
/// decimals, the first level's order cells are "-".
void write_csv(const ConvergenceReport& rep, std::ostream& out);
void write_csv_file(const ConvergenceReport& rep, const std::string& path);

/// Flat key=value config file; keys match the CLI flags. Unknown keys are an
/// error naming the key; a missing nu defaults to 1.0.
StudyConfig read_config(std::istream& in);
StudyConfig read_config_file(const std::string& path);
void write_config(const StudyConfig& cfg, std::ostream& out);

/// Names used in config files and on the command line.
const char* problem_name(ProblemSpec::Kind k);
const char* domain_name(DomainKind d);
const char* pattern_name(MeshPattern p);
const char* start_name(StartPolicy s);
ProblemSpec::Kind parse_problem(const std::string& s);
ElementKind parse_element(const std::string& s);
DomainKind parse_domain(const std::string& s);
MeshPattern parse_pattern(const std::string& s);
StartPolicy parse_start(const std::string& s);

}  // namespace hdm

#endif
