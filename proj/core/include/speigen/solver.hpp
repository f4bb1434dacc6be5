#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "speigen/grid.hpp"
#include "speigen/potential.hpp"
#include "speigen/quadrature.hpp"
#include "speigen/shooting.hpp"

namespace speigen {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverConfig {
    int n = 0;
    double initial_domain = 0.0;     // 0 = auto from the empirical support scale
    double domain_growth = 1.5;
    double inner_tol = 1e-10;        // relative ε change ending the SCF loop
    double outer_tol = 1e-6;         // relative ε change ending the domain loop
    int max_inner_iters = 300;
    int max_outer_iters = 12;
    int points_per_wavelength = 32;  // resolution against the innermost oscillation
    std::size_t min_grid_points = 1200;
    std::size_t max_grid_points = 4000000;
    double mixing = 0.5;             // potential under-relaxation weight
    double tail_exponent = 30.0;     // WKB suppression required beyond the turning point
    Integrator integrator = Integrator::numerov;
    Quadrature quadrature = Quadrature::trapezoid;
};

struct SolveTrace {
    std::vector<double> inner_epsilons;  // ε per SCF iteration, last domain round
    std::vector<double> outer_epsilons;  // ε per domain round
    int total_inner_iters = 0;
    int outer_iters = 0;
};

/// Self-consistent stationary state. f solves u'' = (2φ - ε) u with u = r f,
/// φ = poisson_potential(f²), and ∫ f² d³x = 4π ∫ f² r² dr = 1. Eigenvalues
/// are stored in this Schrödinger-form convention and come out negative.
struct EigenState {
    int n = 0;
    double epsilon = 0.0;
    RadialProfile f;
    RadialProfile phi;
    double norm_residual = 0.0;  // |4π ∫ f² r² dr - 1|
    double eq_residual = 0.0;    // relative discrete residual of the radial equation
    bool converged = false;
    SolveTrace trace;
};

/// Empirical size of the n-th state, used only to seed domain and grid choices.
double initial_support_scale(int n);

/// Resolution scale for the grid policy: the innermost half-oscillation
/// length, floored for low n where resolving the wide density bumps that
/// source the potential is the tighter constraint.
double initial_wavelength_scale(int n);

/// Full solve: nested SCF + domain-extension iterations from the analytic
/// initial guess. Non-convergence is reported via converged = false; defective
/// inputs and bracket failures throw SolverError.
EigenState solve_stationary_state(const SolverConfig& config);

/// One SCF step in the guess's frozen potential: eigen-solve, renormalize,
/// then recompute and mix the potential.
EigenState inner_scf_step(const EigenState& guess, const SolverConfig& config);

/// Exact symmetry map: r -> r/N, f -> N² f, φ -> N² φ, ε -> N² ε. The result
/// carries L² mass N and preserves the discrete equation residual.
EigenState scale_state(const EigenState& state, double N);

/// Discrete residual of u'' = (2φ - ε) u for a state (Numerov stencil),
/// relative L² over interior points.
double equation_residual(const EigenState& state);

/// Largest relative sup-norm mismatch between state.phi and the potential
/// recomputed from state.f (self-consistency diagnostic).
double potential_mismatch(const EigenState& state, Quadrature scheme);

struct ResolutionReport {
    double epsilon_rel_change = 0.0;
    double max_node_rel_change = 0.0;
    double max_extremum_pos_rel_change = 0.0;
    double max_extremum_amp_rel_change = 0.0;
    double threshold = 0.0;
    bool reliable = false;
};

/// Re-solves at doubled grid resolution and reports relative changes in ε,
/// node positions and extremum positions/amplitudes.
ResolutionReport validate_resolution(const EigenState& state,
                                     const SolverConfig& config,
                                     double threshold = 1e-4);

}  // namespace speigen
