#pragma once

#include "config.hpp"
#include "report.hpp"

namespace desitter::cli {

enum ExitCode { kSuccess = 0, kInternalError = 1, kInputError = 2, kVerificationFailure = 3 };

// Each command fills report and returns an exit code; library errors propagate.
int cmd_analyze_curve(const RunConfig& cfg, Json& report);
int cmd_analyze_canal(const RunConfig& cfg, Json& report);
int cmd_mesh(const RunConfig& cfg, Json& report);
int cmd_verify_suite(const RunConfig& cfg, Json& report);
int cmd_sweep(const RunConfig& cfg, Json& report);

}  // namespace desitter::cli
