#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "speigen/fits.hpp"
#include "speigen/solver.hpp"

namespace speigen {

struct FeatureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Extremum {
    double r = 0.0;
    double value = 0.0;
};

/// Structural features of an eigenfunction: n nodes z_i, nodal distances
/// d_i = z_{i+1} - z_i, and n+1 sign-alternating extrema starting from the
/// central maximum at r = 0. effective_support is the last extremum radius.
struct EigenFeatures {
    int n = 0;
    std::vector<double> nodes;
    std::vector<double> nodal_distances;
    std::vector<Extremum> extrema;
    double effective_support = 0.0;
};

/// Rotation curve v(r) = sqrt(M(r)/r) with M(r) = ∫_0^r f² s² ds (no 4π).
/// A state with n nodes yields 2n+1 velocity extrema interlacing the merged
/// node/extremum set. plateau is the linear fit over [r̃_2, r̃_{2n-2}]
/// (present for n >= 3).
struct VelocityCurve {
    RadialProfile v;
    std::vector<Extremum> extrema;
    std::optional<FitResult> plateau;
};

/// Index window (into features.extrema) for the amplitude power-law fit:
/// extrema i >= 1 with r̂_i <= 0.95 r_min, where r_min locates the minimum of
/// |f̂_i|. When |f̂_i| is monotone (no interior minimum) the window spans all
/// i >= 1 and is flagged.
struct AmplitudeWindow {
    std::size_t first = 1;
    std::size_t last = 0;  // inclusive
    double r_min = 0.0;
    bool monotone = false;
};

/// Interior zeros of f, each refined by linear interpolation of the
/// bracketing sign change.
std::vector<double> find_nodes(const RadialProfile& f);

/// Local extrema of f including r = 0, refined by a three-point quadratic
/// vertex. Oscillations below noise_floor (absolute) are ignored.
std::vector<Extremum> find_extrema(const RadialProfile& f, double noise_floor = 1e-12);

/// Extracts and validates the feature set of a converged state: exact node
/// and extremum counts, sign alternation, monotone tail beyond the last
/// extremum. Violations throw FeatureError naming the defect.
EigenFeatures extract_features(const EigenState& state);

/// Rotation curve of a state, including extremum extraction and, for
/// n >= 3, the mid-range plateau fit.
VelocityCurve velocity_curve(const EigenState& state);

AmplitudeWindow amplitude_fit_window(const EigenFeatures& features);

/// Power-law fit |f̂_i| = b r̂_i^a over the amplitude window (needs n >= 3).
FitResult amplitude_power_law(const EigenFeatures& features);

}  // namespace speigen
