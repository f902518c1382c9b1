#pragma once

#include <functional>
#include <string>
#include <vector>

namespace desitter {

/// One measured quantity of a criterion. pass is value <= tolerance unless
/// at_least is set (value >= tolerance), or exact for boolean checks.
struct AcceptanceCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool at_least = false;
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<AcceptanceCheck> checks;
  std::string error;  // set when the criterion threw
  double seconds = 0.0;

  bool pass() const;
};

struct AcceptanceOptions {
  bool quick = false;   // fewer random paths and curves; tolerances unchanged
  bool mutate = false;  // sign error in the conformal torsion (negative control)
};

/// Runs one criterion (1..11). Never throws; failures are recorded in the result.
CriterionResult run_criterion(int id, const AcceptanceOptions& options = {});

/// Runs every criterion in order; progress is called after each one.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {},
                                            const std::function<void(const CriterionResult&)>& progress = {});

/// "criterion N PASS|FAIL  title  (worst check)".
std::string summary_line(const CriterionResult& result);

}  // namespace desitter
