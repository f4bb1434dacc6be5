#include <algorithm>
#include <cmath>

#include "speigen/features.hpp"
#include "speigen/solver.hpp"

namespace speigen {

namespace {

double rel_change(double a, double b) {
    double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

ResolutionReport validate_resolution(const EigenState& state,
                                     const SolverConfig& config,
                                     double threshold) {
    SolverConfig refined = config;
    refined.n = state.n;
    refined.points_per_wavelength = config.points_per_wavelength * 2;
    EigenState fine = solve_stationary_state(refined);

    ResolutionReport out;
    out.threshold = threshold;
    out.epsilon_rel_change = rel_change(state.epsilon, fine.epsilon);

    EigenFeatures coarse_f = extract_features(state);
    EigenFeatures fine_f = extract_features(fine);
    for (std::size_t i = 0; i < coarse_f.nodes.size(); ++i)
        out.max_node_rel_change = std::max(
            out.max_node_rel_change, rel_change(coarse_f.nodes[i], fine_f.nodes[i]));
    for (std::size_t i = 0; i < coarse_f.extrema.size(); ++i) {
        // the central extremum sits at r = 0 on both grids; skip its position
        if (i > 0)
            out.max_extremum_pos_rel_change =
                std::max(out.max_extremum_pos_rel_change,
                         rel_change(coarse_f.extrema[i].r, fine_f.extrema[i].r));
        out.max_extremum_amp_rel_change =
            std::max(out.max_extremum_amp_rel_change,
                     rel_change(coarse_f.extrema[i].value, fine_f.extrema[i].value));
    }
    out.reliable = fine.converged && out.epsilon_rel_change < threshold &&
                   out.max_node_rel_change < threshold &&
                   out.max_extremum_pos_rel_change < threshold &&
                   out.max_extremum_amp_rel_change < threshold;
    return out;
}

}  // namespace speigen
