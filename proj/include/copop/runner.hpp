// Batch driver: dispatches subcommands on a parsed configuration and writes
// machine-readable reports (JSON) and plot-ready CSV artifacts.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "copop/config.hpp"

namespace copop {

struct RunOptions {
    std::string out_dir;  // empty = config output.directory
    std::optional<int> radial_nodes;
    std::optional<int> angular_nodes;
    std::optional<std::vector<double>> r_sequence;
    std::optional<std::vector<double>> p_list;
    std::optional<double> delta;  // test-function exponent override
    bool normalize_origin = false;
};

/// Known subcommands: admissible, moments, counting, verify-cov, hs, essnorm,
/// schatten, closed-range, matrix, all.
/// Exit code 0 on success, 1 on computation failure (partial artifacts are
/// removed), 2 on configuration errors.
int run_subcommand(const std::string& subcommand, const std::string& config_path,
                   const RunOptions& options);

}  // namespace copop
