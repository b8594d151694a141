#pragma once

#include "padicjac/io.hpp"

namespace padicjac {

struct RunOptions {
    std::string point;   // aj
    std::string base;    // aj
    std::string divisor; // theta: "p:q;p:q"  integrate: "point:mult;..."
    std::string at;      // theta: "z,w"
    std::string measure; // integrate: generator index (1-based)
    std::string dot_path;      // quotient graph DOT sidecar
    std::string tree_dot_path; // finite tree DOT sidecar
    int depth = -1;   // override config
    int trunc = -1;   // override config
    long digits = -1; // override config precision
};

// Executes a CLI command against a parsed config; throws math_error /
// usage_error. Deterministic: identical inputs give identical JSON.
Json run_command(const std::string& command, JobConfig cfg, const RunOptions& opt);

} // namespace padicjac
