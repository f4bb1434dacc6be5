#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "speigen/solver.hpp"

namespace speigen {

/// Exit codes shared by the CLI and the in-process command runners.
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_partial = 2;

/// Batch run settings. cache_dir empty means: $SP_EIGEN_CACHE if set,
/// otherwise ./sp-cache.
struct RunConfig {
    std::vector<int> n_values;
    std::filesystem::path out_dir = ".";
    std::filesystem::path cache_dir;
    int jobs = 1;
    std::string format = "csv";  // csv | json
    SolverConfig solver;
};

struct CommandStats {
    int solved = 0;
    int cache_hits = 0;
    int failed = 0;       // solver errors
    int unconverged = 0;  // completed but converged = false
};

/// Parses "3", "0..8", "10..40:5" and comma-joined combinations.
std::vector<int> parse_n_spec(const std::string& spec);

std::filesystem::path resolve_cache_dir(const RunConfig& run);

/// Solve (or load) every requested state into the cache. Returns exit_ok,
/// exit_partial when some states failed or did not converge.
int run_solve(const RunConfig& run, std::ostream& log, CommandStats* stats = nullptr);

/// Per-state structural exports: profile, nodes, nodal distances vs right
/// nodes, extrema, velocity extrema, rescaled nodal pattern.
int run_features(const RunConfig& run, std::ostream& log);

/// Batch heuristic report: law fits as JSON plus per-law data tables.
int run_report(const RunConfig& run, std::ostream& log);

/// Resolution validation of cached states; exit_partial when flagged.
int run_validate(const RunConfig& run, std::ostream& log);

/// Collapse metrics for rescaled velocity curves and nodal patterns.
int run_collapse(const RunConfig& run, std::ostream& log);

}  // namespace speigen
