// run_config.hpp — flat key = value run configuration shared by all CLI
// commands.  Files round-trip losslessly (17 significant digits); unknown
// keys are rejected with the offending line.

#pragma once

#include <string>
#include <vector>

namespace qbatt::cli {

struct RangeSpec {
    double lo = 0.0;
    double hi = 0.0;
    int points = 0;

    static RangeSpec parse(const std::string& text);  // "lo:hi:points"
    std::string to_string() const;
    std::vector<double> grid() const;
};

struct RunConfig {
    int n_atoms = 1;
    double amp = 1.0;
    double omega = 0.0;  // 0 = unset; required by --protocol fixed
    double lambda = 0.0;
    std::string protocol = "locked";  // locked | fixed
    std::string mode = "analytic";    // surface: analytic | numeric
    RangeSpec t_range{0.5, 30.0, 400};
    RangeSpec a_range{0.05, 2.0, 80};
    RangeSpec omega_range{0.05, 1.5, 120};
    RangeSpec lambda_range{-2.0, 2.0, 81};
    std::vector<int> n_list;  // sweep-n targets
    int workers = 0;          // 0 = DICKE_BATTERY_WORKERS / hardware
    std::string out;
    // selfcheck knobs
    bool quick = false;
    double perturb_bessel = 0.0;

    // Apply one key = value assignment; throws std::invalid_argument on
    // unknown keys or unparsable values.
    void apply(const std::string& key, const std::string& value);

    // Load a flat key = value file on top of the current values.
    void load_file(const std::string& path);

    // Serialized form; parsing it back reproduces every field exactly.
    std::string to_file_text() const;

    void save_file(const std::string& path) const;

    int resolved_workers() const;
    void validate_common() const;
};

std::string format_n_list(const std::vector<int>& ns);
std::vector<int> parse_n_list(const std::string& text);

}  // namespace qbatt::cli
