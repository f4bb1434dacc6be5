#pragma once

#include <optional>
#include <string>
#include <vector>

#include "speigen/features.hpp"
#include "speigen/fits.hpp"
#include "speigen/solver.hpp"

namespace speigen {

/// Per-state scalars feeding the cross-state laws.
struct StateSummary {
    int n = 0;
    double epsilon = 0.0;
    bool converged = false;
    std::optional<bool> validated;      // set when a resolution check was run
    double support = 0.0;               // r̂_n
    std::optional<double> outer_node;   // z_n (n >= 1)
    std::optional<double> outer_distance;  // d_{n-1} (n >= 2)
    std::optional<double> amp_coefficient; // b(n) (n >= 3)
    std::optional<double> amp_exponent;    // a(n)
    std::optional<double> plateau_slope;     // σ(n) (n >= 3)
    std::optional<double> plateau_intercept; // q(n)
    double outer_velocity_r = 0.0;      // r̃_2n
    double outer_velocity_v = 0.0;      // ṽ_2n
};

/// One cross-state law: either a fit or the reason it was skipped.
struct LawFit {
    std::string name;
    std::optional<FitResult> fit;
    std::string skipped;
};

struct FailedState {
    int n = 0;
    std::string reason;
};

/// Batch digest: per-state features plus the heuristic scaling laws.
/// Parabolic laws need >= 3 usable states; the amplitude-exponent law is
/// fitted on states with n >= exponent_min_n. Failed states are excluded
/// and listed, never fatal.
struct HeuristicReport {
    std::vector<StateSummary> states;
    std::vector<FailedState> failed;
    LawFit support_law;        // r̂_n vs n, parabola
    LawFit outer_node_law;     // z_n vs n, parabola
    LawFit outer_distance_law; // d_{n-1} vs n, parabola
    LawFit exponent_law;       // a(n) vs n, shifted power with asymptote -1
    LawFit slope_law;          // σ(n) vs n, power law
    LawFit outer_velocity_law; // ṽ_2n vs r̃_2n, power law
    LawFit outer_radius_law;   // r̃_2n vs n, parabola
};

struct ReportOptions {
    int exponent_min_n = 20;
};

HeuristicReport build_heuristic_report(const std::vector<EigenState>& states,
                                       const ReportOptions& options = {});

}  // namespace speigen
