// commands.hpp — CLI command implementations.  Each command consumes a
// RunConfig, writes one or two CSVs plus a .meta sidecar, and returns the
// process exit code.  Kept as library functions so tests can drive them
// in-process.

#pragma once

#include <string>
#include <vector>

#include "qbatt/run_config.hpp"

namespace qbatt::cli {

int cmd_trace(const RunConfig& cfg);
int cmd_surface(const RunConfig& cfg);
int cmd_sweep_n(const RunConfig& cfg);
int cmd_sweep_lambda(const RunConfig& cfg);
int cmd_ground(const RunConfig& cfg);
int cmd_selfcheck(const RunConfig& cfg);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// The fast invariant suite behind `selfcheck`; perturb_bessel injects a fault
// into the Bessel comparison so the check of the check can be exercised.
std::vector<CheckResult> selfcheck_report(bool quick, double perturb_bessel = 0.0);

}  // namespace qbatt::cli
