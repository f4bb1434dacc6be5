#pragma once

#include <vector>

namespace speigen {

/// Quadrature scheme for the radial integrals. trapezoid works on any grid;
/// simpson (cubic-accurate cumulative rule) requires uniform spacing.
enum class Quadrature { trapezoid, simpson };

/// Cumulative integral over the grid knots; out[0] = 0, out[i] = ∫_{r0}^{ri} y dr.
std::vector<double> cumulative_integral(const std::vector<double>& r,
                                        const std::vector<double>& y,
                                        Quadrature scheme);

double total_integral(const std::vector<double>& r, const std::vector<double>& y,
                      Quadrature scheme);

}  // namespace speigen
