#pragma once

#include <cstddef>
#include <vector>

#include "speigen/features.hpp"

namespace speigen {

enum class CurveKind { nodal_pattern, velocity };

/// Dimensionless curve after the universality rescaling; x is ordered.
struct RescaledCurve {
    CurveKind kind = CurveKind::velocity;
    int n = 0;
    std::vector<double> x;
    std::vector<double> y;
};

/// Nodal pattern (Z_{i+1}, D_i) = (z_{i+1}/z_n, d_i/d_{n-1}), i = 1..n-1.
/// Needs n >= 2; the last point is (1, 1) by construction.
RescaledCurve rescale_nodal_pattern(const EigenFeatures& features);

/// Velocity curve rescaled by its outer extremum: (r/r̃_2n, v/ṽ_2n).
RescaledCurve rescale_velocity(const VelocityCurve& curve, int n);

/// Collapse quality: curves are sampled by piecewise-linear interpolation on
/// a common grid over [x_lo, x_hi]; the metric is the maximum over samples of
/// (max - min) / mean. The window must lie inside every curve's range.
double collapse_metric(const std::vector<RescaledCurve>& curves, double x_lo,
                       double x_hi, std::size_t samples = 512);

}  // namespace speigen
