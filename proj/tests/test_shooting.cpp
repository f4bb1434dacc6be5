#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "speigen/shooting.hpp"
#include "speigen/solver.hpp"

using namespace speigen;

namespace {

constexpr std::size_t npts = 3001;
constexpr double r_end = 30.0;
constexpr double step = r_end / static_cast<double>(npts - 1);

// Smooth solvable well: v(r) = -6 / cosh²(r) on the half line has exactly one
// bound state, ε = -1 with u(r) = tanh(r) sech(r). Being C-infinity it lets
// the fourth-order integrators run at design accuracy.
std::vector<double> pt_well() {
    std::vector<double> v(npts);
    for (std::size_t i = 0; i < npts; ++i) {
        double c = std::cosh(step * static_cast<double>(i));
        v[i] = -6.0 / (c * c);
    }
    return v;
}

double u_exact(double r) { return std::tanh(r) / std::cosh(r); }

}  // namespace

TEST_CASE("node counting on a constant-coefficient oscillator") {
    // u'' = -u from u(0)=0 is sin(r): zeros at pi, 2pi, 3pi inside (0, 10)
    std::vector<double> q(1001, -1.0);
    double h = 10.0 / 1000.0;
    CHECK(count_nodes_outward(q, h, Integrator::numerov) == 3);
    CHECK(count_nodes_outward(q, h, Integrator::rk4) == 3);

    std::vector<double> q4(1001, -4.0);  // sin(2r): six zeros inside (0, 10)
    CHECK(count_nodes_outward(q4, h, Integrator::numerov) == 6);
}

TEST_CASE("spherical box levels from node-count bisection") {
    // v = -V0 on [0, L]: levels at -V0 + ((n+1) pi / L)^2
    const double v0 = 2.0, box = 10.0;
    const std::size_t N = 4001;
    const double h = box / static_cast<double>(N - 1);
    std::vector<double> v(N, -v0);
    const double expected[4] = {-1.9013039559891065, -1.6052158239564256,
                                -1.1117356039019577, -0.42086329582570281};
    for (int n = 0; n < 4; ++n) {
        BisectionResult res = bisect_eigenvalue(v, h, n, -v0, 0.0, Integrator::numerov);
        CHECK(res.epsilon == doctest::Approx(expected[n]).epsilon(1e-7));
        CHECK(res.bracket_width < 1e-12);
        CHECK(res.iterations > 10);
    }
}

TEST_CASE("smooth well eigenvalue lands on the exact level") {
    std::vector<double> v = pt_well();
    for (auto method : {Integrator::numerov, Integrator::rk4}) {
        BisectionResult res = bisect_eigenvalue(v, step, 0, -5.999, -1e-9, method);
        CHECK(res.epsilon == doctest::Approx(-1.0).epsilon(1e-6));
        CHECK(res.bracket_width < 1e-12);
    }
}

TEST_CASE("bracket without the requested level is rejected with diagnostics") {
    std::vector<double> v = pt_well();
    // the only level sits at -1; this window lies entirely above it
    CHECK_THROWS_WITH_AS(bisect_eigenvalue(v, step, 0, -0.5, -0.3, Integrator::numerov),
                         doctest::Contains("bracket not found"), SolverError);
    // level 1 does not exist in this well at all
    CHECK_THROWS_AS(bisect_eigenvalue(v, step, 1, -5.999, -1e-9, Integrator::numerov),
                    SolverError);
}

TEST_CASE("outer turning index finds the edge of the forbidden zone") {
    std::vector<double> ramp(101);
    for (int i = 0; i <= 100; ++i) ramp[i] = -1.0 + 0.02 * i;  // crosses at i = 50
    CHECK(outer_turning_index(ramp) == 51);

    std::vector<double> open(50, -0.5);
    CHECK(outer_turning_index(open) == std::numeric_limits<std::size_t>::max());

    // only the outermost sign change counts
    std::vector<double> wiggle{-1.0, 1.0, -1.0, 1.0, 1.0};
    CHECK(outer_turning_index(wiggle) == 3);
}

TEST_CASE("glued eigenfunction reproduces the exact bound state") {
    std::vector<double> v = pt_well();
    double eps = bisect_eigenvalue(v, step, 0, -5.999, -1e-9, Integrator::numerov).epsilon;
    std::vector<double> q(npts);
    for (std::size_t i = 0; i < npts; ++i) q[i] = v[i] - eps;

    std::vector<double> u = glued_eigenfunction(q, step, Integrator::numerov);
    REQUIRE(u.size() == npts);
    CHECK(u[0] == 0.0);

    // ground state: non-negative throughout
    double peak = 0.0;
    for (std::size_t i = 1; i + 1 < npts; ++i) {
        CHECK(u[i] >= 0.0);
        peak = std::max(peak, u[i]);
    }
    REQUIRE(peak > 0.0);

    // profile matches tanh(r) sech(r) once both are scaled to unit peak
    double scale = 0.5 / peak;  // exact peak value is 1/2 at r = arctanh(1/sqrt 2)
    auto at = [&](double r) { return u[static_cast<std::size_t>(r / step + 0.5)]; };
    for (double r : {0.5, 1.0, 2.0, 3.0, 5.0, 8.0})
        CHECK(at(r) * scale == doctest::Approx(u_exact(r)).epsilon(1e-6));

    // far-field decay rate: kappa = sqrt(-eps) = 1
    CHECK(at(12.0) / at(10.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-5));

    // tail monotone decreasing well beyond the turning point
    for (std::size_t i = static_cast<std::size_t>(4.0 / step); i + 1 < npts; ++i)
        CHECK(u[i + 1] <= u[i] * (1.0 + 1e-12));
}

TEST_CASE("glued eigenfunction residual is small at the matching point") {
    std::vector<double> v = pt_well();
    double eps = bisect_eigenvalue(v, step, 0, -5.999, -1e-9, Integrator::numerov).epsilon;
    std::vector<double> q(npts);
    for (std::size_t i = 0; i < npts; ++i) q[i] = v[i] - eps;
    std::vector<double> u = glued_eigenfunction(q, step, Integrator::numerov);

    std::size_t m = outer_turning_index(q);
    REQUIRE(m != std::numeric_limits<std::size_t>::max());
    // three-point recurrence residual across the glue, relative to the scale
    double h2 = step * step;
    for (std::size_t i = m - 2; i <= m + 2; ++i) {
        double res = u[i + 1] - 2.0 * u[i] - h2 * q[i] * u[i] + u[i - 1];
        CHECK(std::abs(res) < 1e-6 * std::abs(u[i]));
    }
}

TEST_CASE("wall-bounded regime returns the outward sweep unchanged") {
    // box level n=1: no classically forbidden region, ends at the wall
    const double v0 = 2.0, box = 10.0;
    const std::size_t N = 4001;
    const double h = box / static_cast<double>(N - 1);
    std::vector<double> q(N);
    for (std::size_t i = 0; i < N; ++i) q[i] = -v0 - (-1.6052158239564256);
    std::vector<double> u = glued_eigenfunction(q, h, Integrator::numerov);

    int flips = 0;
    double peak = 0.0;
    for (std::size_t i = 1; i + 1 < N; ++i) peak = std::max(peak, std::abs(u[i]));
    for (std::size_t i = 1; i + 2 < N; ++i)
        if (u[i] != 0.0 && u[i + 1] != 0.0 && (u[i] > 0.0) != (u[i + 1] > 0.0)) ++flips;
    CHECK(flips == 1);  // sin(2 pi r / L): one interior zero at L/2
    CHECK(std::abs(u[N - 1]) < 1e-3 * peak);  // eigenfunction vanishes at the wall
}
