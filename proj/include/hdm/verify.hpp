#ifndef HDM_VERIFY_HPP
#define HDM_VERIFY_HPP

#include <string>
#include <vector>

#include "hdm/reference/tables.hpp"
#include "hdm/study.hpp"

namespace hdm {

struct VerifyResult {
  std::string name;
  bool pass = true;
  std::vector<std::string> failures;
  double seconds = 0.;
  ConvergenceReport report;
};

/// The study configuration a baseline table refers to.
StudyConfig baseline_config(const reference::RefTable& t);

/// Runs one baseline study and checks it against the frozen table: unknown
/// counts, monotone error decay, and the table-specific value and order
/// bands.
VerifyResult verify_baseline(const reference::RefTable& t);

/// All five baselines in a fixed order.
std::vector<VerifyResult> verify_all_baselines();

}  // namespace hdm

#endif
