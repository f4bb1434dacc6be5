#pragma once

#include <cstddef>
#include <vector>

namespace speigen {

/// Integrator for the reduced radial equation u'' = q(r) u on a uniform grid.
enum class Integrator { numerov, rk4 };

/// Number of interior sign changes of the outward-shot solution u with
/// u(0) = 0, u'(0) = 1 (rescaled on overflow; counting is scale invariant).
int count_nodes_outward(const std::vector<double>& q, double h, Integrator method);

/// Interior index of the outermost sign change of q (classical turning point),
/// or npos when q keeps one sign.
std::size_t outer_turning_index(const std::vector<double>& q);

/// Eigenfunction u built from an outward sweep glued at the turning point to
/// an inward sweep started from u(r_max) = 0; both sides are integrated in
/// their stable direction, so the tail decays cleanly. Unnormalized.
std::vector<double> glued_eigenfunction(const std::vector<double>& q, double h,
                                        Integrator method);

struct BisectionResult {
    double epsilon = 0.0;       // lower edge of the final bracket (n nodes)
    double bracket_width = 0.0;
    int iterations = 0;
};

/// Node-counting bisection for the n-th Dirichlet level of u'' = (v - ε) u,
/// scanning ε in [eps_lo, eps_hi]. v is the frozen potential term (2φ here).
/// Throws SolverError with bracket diagnostics when the window fails.
BisectionResult bisect_eigenvalue(const std::vector<double>& v, double h, int n,
                                  double eps_lo, double eps_hi, Integrator method);

}  // namespace speigen
