#include "doctest.h"

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "speigen/features.hpp"
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

RadialProfile sinc_profile() {
    auto grid = RadialGrid::make_uniform(10.0 * std::numbers::pi, 5000);
    std::vector<double> f(grid->size());
    f[0] = 1.0;
    for (std::size_t i = 1; i < grid->size(); ++i)
        f[i] = std::sin(grid->r[i]) / grid->r[i];
    return RadialProfile(grid, std::move(f));
}

// roots of tan(x) = x: the extrema of sin(x)/x
constexpr double tan_roots[9] = {4.493409457909064,  7.725251836937707,
                                 10.904121659428899, 14.066193912831473,
                                 17.220755271930770, 20.371302959287561,
                                 23.519452498689006, 26.666054258812679,
                                 29.811598790892958};

}  // namespace

TEST_CASE("node finder pins the zeros of sin(r)/r") {
    auto nodes = find_nodes(sinc_profile());
    REQUIRE(nodes.size() == 9);  // k pi for k = 1..9; the endpoint zero is not interior
    for (std::size_t k = 0; k < nodes.size(); ++k)
        CHECK(nodes[k] == doctest::Approx((k + 1) * std::numbers::pi).epsilon(1e-6));
}

TEST_CASE("extremum finder pins the stationary points of sin(r)/r") {
    auto ext = find_extrema(sinc_profile());
    REQUIRE(ext.size() == 10);
    CHECK(ext[0].r == 0.0);
    CHECK(ext[0].value == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t k = 1; k < ext.size(); ++k) {
        CHECK(ext[k].r == doctest::Approx(tan_roots[k - 1]).epsilon(1e-6));
        // envelope 1/r: magnitudes decrease, signs alternate
        CHECK(std::abs(ext[k].value) < std::abs(ext[k - 1].value));
        CHECK((ext[k].value > 0.0) != (ext[k - 1].value > 0.0));
        CHECK(std::abs(ext[k].value) ==
              doctest::Approx(1.0 / std::sqrt(1.0 + ext[k].r * ext[k].r)).epsilon(1e-6));
    }
}

TEST_CASE("a monotone profile has only the central extremum") {
    auto grid = RadialGrid::make_uniform(12.0, 600);
    std::vector<double> f(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) f[i] = std::exp(-grid->r[i]);
    auto ext = find_extrema(RadialProfile(grid, std::move(f)));
    REQUIRE(ext.size() == 1);
    CHECK(ext[0].r == 0.0);
    CHECK(ext[0].value == doctest::Approx(1.0));
}

TEST_CASE("feature extraction of a solved state is structurally complete") {
    const EigenState& st = solved(5);
    REQUIRE(st.converged);
    EigenFeatures feat = extract_features(st);

    CHECK(feat.n == 5);
    REQUIRE(feat.nodes.size() == 5);
    REQUIRE(feat.extrema.size() == 6);
    REQUIRE(feat.nodal_distances.size() == 4);

    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(feat.nodal_distances[i] > 0.0);
        CHECK(feat.nodal_distances[i] ==
              doctest::Approx(feat.nodes[i + 1] - feat.nodes[i]).epsilon(1e-12));
    }
    // gaps widen toward the edge
    for (std::size_t i = 1; i < 4; ++i)
        CHECK(feat.nodal_distances[i] > feat.nodal_distances[i - 1]);

    for (int k = 0; k < 5; ++k) {
        CHECK(feat.extrema[k].r < feat.nodes[k]);
        CHECK(feat.nodes[k] < feat.extrema[k + 1].r);
    }
    CHECK(feat.effective_support == feat.extrema.back().r);
    CHECK(feat.effective_support < st.f.grid->r_max());
}

TEST_CASE("rotation curve (excited): endpoint, extrema and rising plateau") {
    const EigenState& st = solved(5);
    VelocityCurve curve = velocity_curve(st);
    REQUIRE(curve.v.size() == st.f.size());
    CHECK(curve.v.values[0] == 0.0);
    for (std::size_t i = 1; i < curve.v.size(); ++i) CHECK(curve.v.values[i] > 0.0);

    REQUIRE(curve.extrema.size() == 11);  // 2n + 1
    for (std::size_t i = 0; i + 1 < curve.extrema.size(); ++i)
        CHECK(curve.extrema[i].r < curve.extrema[i + 1].r);
    // alternation: peaks and dips take turns, starting with a peak
    for (std::size_t i = 0; i + 1 < curve.extrema.size(); ++i) {
        if (i % 2 == 0)
            CHECK(curve.extrema[i].value > curve.extrema[i + 1].value);
        else
            CHECK(curve.extrema[i].value < curve.extrema[i + 1].value);
    }

    REQUIRE(curve.plateau.has_value());
    CHECK(curve.plateau->coefficients[0] > 0.0);  // slope of the rising staircase mid-range
}

TEST_CASE("rotation curve (ground state): single peak, no plateau") {
    VelocityCurve curve = velocity_curve(solved(0));
    CHECK(curve.extrema.size() == 1);
    CHECK_FALSE(curve.plateau.has_value());
    CHECK(curve.extrema[0].value > 0.0);
}

TEST_CASE("amplitude window spans all arches while the envelope is monotone") {
    EigenFeatures feat = extract_features(solved(5));
    AmplitudeWindow win = amplitude_fit_window(feat);
    CHECK(win.monotone);
    CHECK(win.first == 1);
    CHECK(win.last == 5);

    FitResult fit = amplitude_power_law(feat);
    REQUIRE(fit.coefficients.size() == 2);
    CHECK(fit.coefficients[0] > 0.0);   // prefactor
    CHECK(fit.coefficients[1] < 0.0);   // decaying envelope
    CHECK(fit.coefficients[1] > -1.0);
    CHECK(fit.n_points == 5);
}

TEST_CASE("amplitude window stops short of the outer-edge bulge") {
    EigenFeatures feat = extract_features(solved(9));
    AmplitudeWindow win = amplitude_fit_window(feat);
    CHECK_FALSE(win.monotone);
    CHECK(win.r_min > 0.0);
    CHECK(win.first == 1);
    CHECK(win.last < 9);
    CHECK(feat.extrema[win.last].r <= 0.95 * win.r_min);
    CHECK(feat.extrema[win.last + 1].r > 0.95 * win.r_min);
}

TEST_CASE("feature extraction rejects a state whose node count lies") {
    auto grid = RadialGrid::make_uniform(10.0, 500);
    std::vector<double> f(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) f[i] = std::exp(-grid->r[i]);
    EigenState bogus;
    bogus.n = 1;  // claims one node; the profile has none
    bogus.f = RadialProfile(grid, f);
    bogus.phi = RadialProfile(grid, std::vector<double>(grid->size(), -1.0));
    CHECK_THROWS_WITH_AS(extract_features(bogus),
                         doctest::Contains("node count mismatch"), FeatureError);
}

TEST_CASE("amplitude power law needs at least three arches") {
    EigenFeatures too_small = extract_features(solved(2));
    CHECK_THROWS_WITH_AS(amplitude_power_law(too_small),
                         doctest::Contains("n >= 3"), FeatureError);
}
