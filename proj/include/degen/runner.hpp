#pragma once

#include <string>

#include "degen/config.hpp"

namespace degen {

struct RunOutcome {
  int exit_code = 0;
  Json report;
};

// Execute a resolved run: writes report.json plus the subcommand's CSV
// artifacts under cfg.out_dir and prints a one-line summary (with wall
// time) to stdout.  Outputs are deterministic given (config, seed); wall
// time never enters the files.  Exit codes: 0 success, 2 validation,
// 3 solver failure, 4 assertion failure, 5 partial sweep.
RunOutcome execute(const RunConfig& cfg, int threads = 1);

}  // namespace degen
