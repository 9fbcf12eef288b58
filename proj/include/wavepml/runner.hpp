#pragma once

#include <string>

#include "wavepml/config.hpp"

namespace wavepml {

/// Dispatch the configured study, write its CSV outputs under out_dir and
/// print one summary line per emitted check. Returns the process exit
/// code: 0 all checks passed, 2 at least one failed, 1 execution error.
int run(const RunConfig& config);

/// Run twice (second pass into a scratch subdirectory) and compare file
/// digests; returns 0 on byte-identical outputs.
int run_with_seed_check(const RunConfig& config);

}  // namespace wavepml
