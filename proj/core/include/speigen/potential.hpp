#pragma once

#include "speigen/grid.hpp"
#include "speigen/quadrature.hpp"

namespace speigen {

/// Shell integral M(r) = ∫_0^r ρ(s) s² ds for every grid knot.
RadialProfile enclosed_profile(const RadialProfile& density, Quadrature scheme);

/// M(r) at an arbitrary radius 0 <= r <= r_max (partial last panel included).
double enclosed_integral(const RadialProfile& density, double r, Quadrature scheme);

/// Potential of a spherically symmetric source with vacuum boundary:
///   φ(r) = -(1/r) ∫_0^r ρ s² ds - ∫_r^{rmax} ρ s ds
/// φ(0) carries the analytic limit -∫_0^{rmax} ρ s ds. For ρ >= 0 the result
/// is non-positive and increases monotonically toward 0 beyond the support.
RadialProfile poisson_potential(const RadialProfile& density, Quadrature scheme);

}  // namespace speigen
