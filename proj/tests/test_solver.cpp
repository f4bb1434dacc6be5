#include "doctest.h"

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "speigen/grid.hpp"
#include "speigen/potential.hpp"
#include "speigen/solver.hpp"

using namespace speigen;

namespace {

const EigenState& solved(int n) {
    static std::map<int, EigenState> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        SolverConfig config;
        config.n = n;
        it = cache.emplace(n, solve_stationary_state(config)).first;
    }
    return it->second;
}

double mass_of(const EigenState& state) {
    const auto& r = state.f.grid->r;
    std::vector<double> u2(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        double u = state.f.values[i] * r[i];
        u2[i] = u * u;
    }
    return 4.0 * std::numbers::pi * total_integral(r, u2, Quadrature::trapezoid);
}

}  // namespace

TEST_CASE("ground state converges with the expected global properties") {
    const EigenState& st = solved(0);
    REQUIRE(st.converged);
    CHECK(st.n == 0);
    CHECK(st.epsilon < 0.0);
    CHECK(st.epsilon == doctest::Approx(-0.002061621561).epsilon(1e-6));
    CHECK(st.norm_residual < 1e-9);
    CHECK(st.eq_residual < 1e-6);
    CHECK(mass_of(st) == doctest::Approx(1.0).epsilon(1e-12));

    // nodeless, positive, decreasing from the center
    CHECK(st.f.values[0] > 0.0);
    std::size_t floor_start = st.f.size();
    for (std::size_t i = 0; i + 1 < st.f.size(); ++i) {
        if (st.f.values[i + 1] > st.f.values[i] * (1.0 + 1e-9) &&
            st.f.values[i] > 1e-12 * st.f.values[0]) {
            floor_start = i;
            break;
        }
    }
    CHECK(floor_start == st.f.size());

    // far potential carries unit mass: r phi -> -1/(4 pi)
    double tail = st.phi.values.back() * st.f.grid->r_max();
    CHECK(tail == doctest::Approx(-1.0 / (4.0 * std::numbers::pi)).epsilon(1e-9));
}

TEST_CASE("third excited state reproduces its frozen eigenvalue") {
    const EigenState& st = solved(3);
    REQUIRE(st.converged);
    CHECK(st.epsilon == doctest::Approx(-8.545658761e-05).epsilon(1e-6));
    int flips = 0;
    const auto& f = st.f.values;
    double prev = f[1];
    for (std::size_t i = 2; i + 1 < f.size(); ++i) {
        if (f[i] == 0.0) continue;
        if ((f[i] > 0.0) != (prev > 0.0)) ++flips;
        prev = f[i];
    }
    CHECK(flips == 3);
    CHECK(st.trace.outer_iters >= 2);
    CHECK(st.trace.total_inner_iters > 10);
}

TEST_CASE("inner SCF step solves the frozen-potential eigenproblem") {
    SolverConfig config;
    config.n = 4;
    double r0 = 1.1 * initial_support_scale(4);
    auto grid = RadialGrid::make_uniform(r0, 3500);
    double k = 5.0 * std::numbers::pi / r0;
    std::vector<double> f(grid->size());
    f[0] = k;
    for (std::size_t i = 1; i < grid->size(); ++i)
        f[i] = std::sin(k * grid->r[i]) / grid->r[i];
    {
        std::vector<double> u2(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            double u = f[i] * grid->r[i];
            u2[i] = u * u;
        }
        double m = 4.0 * std::numbers::pi *
                   total_integral(grid->r, u2, Quadrature::trapezoid);
        for (auto& v : f) v /= std::sqrt(m);
    }
    std::vector<double> f2(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) f2[i] = f[i] * f[i];
    EigenState guess;
    guess.n = 4;
    guess.f = RadialProfile(grid, f);
    guess.phi = poisson_potential(RadialProfile(grid, std::move(f2)),
                                  Quadrature::trapezoid);

    EigenState next = inner_scf_step(guess, config);
    CHECK(next.epsilon < 0.0);
    int flips = 0;
    double prev = next.f.values[1];
    for (std::size_t i = 2; i + 1 < next.f.size(); ++i) {
        double v = next.f.values[i];
        if (v == 0.0) continue;
        if ((v > 0.0) != (prev > 0.0)) ++flips;
        prev = v;
    }
    CHECK(flips == 4);  // node count enforced from the first step on
}

TEST_CASE("eigenvalue deltas contract over the final SCF iterations") {
    const EigenState& st = solved(8);
    REQUIRE(st.converged);
    const auto& eps = st.trace.inner_epsilons;
    REQUIRE(eps.size() >= 3);
    double last = std::abs(eps[eps.size() - 1] - eps[eps.size() - 2]);
    double first = std::abs(eps[1] - eps[0]);
    CHECK(last < 1e-10 * std::abs(st.epsilon) * 10.0);
    CHECK(last < first);
}

TEST_CASE("norm rescaling maps eigenvalue, profiles and residuals exactly") {
    const EigenState& st = solved(3);
    for (double N : {0.5, 2.0, 10.0}) {
        EigenState sc = scale_state(st, N);
        CHECK(sc.epsilon == doctest::Approx(st.epsilon * N * N).epsilon(1e-14));
        CHECK(sc.f.grid->r_max() == doctest::Approx(st.f.grid->r_max() / N).epsilon(1e-14));
        CHECK(sc.f.values[0] == doctest::Approx(st.f.values[0] * N * N).epsilon(1e-14));
        CHECK(sc.phi.values[0] == doctest::Approx(st.phi.values[0] * N * N).epsilon(1e-14));
        // residual of the stationarity equation is scale-invariant
        CHECK(sc.eq_residual <= 10.0 * st.eq_residual + 1e-14);
        // the rescaled profile carries norm N
        CHECK(sc.norm_residual < 1e-9 * N);
    }
}

TEST_CASE("configuration validation rejects unusable settings") {
    SolverConfig bad;
    bad.n = -1;
    CHECK_THROWS_AS(solve_stationary_state(bad), std::invalid_argument);
    bad = SolverConfig{};
    bad.mixing = 0.0;
    CHECK_THROWS_AS(solve_stationary_state(bad), std::invalid_argument);
    bad = SolverConfig{};
    bad.domain_growth = 1.0;
    CHECK_THROWS_AS(solve_stationary_state(bad), std::invalid_argument);
    bad = SolverConfig{};
    bad.points_per_wavelength = 2;
    CHECK_THROWS_AS(solve_stationary_state(bad), std::invalid_argument);

    CHECK_THROWS_AS(scale_state(solved(0), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(scale_state(solved(0), -2.0), std::invalid_argument);
    CHECK_THROWS_AS(scale_state(solved(0), std::nan("")), std::invalid_argument);

    EigenState empty;
    CHECK_THROWS_AS(inner_scf_step(empty, SolverConfig{}), std::invalid_argument);
}

TEST_CASE("iteration-starved solve reports non-convergence with its trace") {
    SolverConfig config;
    config.n = 2;
    config.max_inner_iters = 3;
    config.max_outer_iters = 1;
    EigenState st = solve_stationary_state(config);
    CHECK_FALSE(st.converged);
    CHECK(st.trace.total_inner_iters > 0);
    CHECK_FALSE(st.trace.inner_epsilons.empty());
    CHECK(std::isfinite(st.epsilon));
}

TEST_CASE("resolution validation accepts the default ground-state grid") {
    SolverConfig config;
    ResolutionReport rep = validate_resolution(solved(0), config, 1e-4);
    CHECK(rep.reliable);
    CHECK(rep.epsilon_rel_change < 1e-4);
    CHECK(rep.max_node_rel_change < 1e-4);
    CHECK(rep.max_extremum_pos_rel_change < 1e-4);
    CHECK(rep.max_extremum_amp_rel_change < 1e-4);
}
