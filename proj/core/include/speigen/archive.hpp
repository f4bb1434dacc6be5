#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "speigen/solver.hpp"

namespace speigen {

struct ArchiveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Hash of every solver-config field except n; part of the cache key, so any
/// config change invalidates cached states.
std::string config_hash(const SolverConfig& config);

std::filesystem::path state_filename(int n, const std::string& hash);

/// Writes the versioned archive: JSON metadata plus base64-encoded float64
/// little-endian profile blocks. Loading restores the state bit for bit.
void save_state(const EigenState& state, const SolverConfig& config,
                const std::filesystem::path& file);

EigenState load_state(const std::filesystem::path& file,
                      SolverConfig* config_out = nullptr);

/// Cache lookup for (n, config): loads on hit, otherwise solves and stores.
/// cache_hit reports which path was taken.
EigenState solve_cached(const SolverConfig& config,
                        const std::filesystem::path& cache_dir,
                        bool* cache_hit = nullptr);

}  // namespace speigen
