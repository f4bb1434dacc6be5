#include "doctest.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "speigen/archive.hpp"
#include "speigen/solver.hpp"

using namespace speigen;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() /
                   ("sp-archive-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const EigenState& ground_state() {
    static EigenState state = [] {
        SolverConfig config;
        return solve_stationary_state(config);
    }();
    return state;
}

}  // namespace

TEST_CASE("state archives restore every field bit for bit") {
    SolverConfig config;
    config.mixing = 0.45;  // non-default value must survive the round trip
    const EigenState& st = ground_state();

    fs::path dir = fresh_dir("roundtrip");
    fs::path file = dir / "state.json";
    save_state(st, config, file);

    SolverConfig loaded_config;
    EigenState back = load_state(file, &loaded_config);

    CHECK(back.n == st.n);
    CHECK(back.epsilon == st.epsilon);
    CHECK(back.converged == st.converged);
    CHECK(back.norm_residual == st.norm_residual);
    CHECK(back.eq_residual == st.eq_residual);
    REQUIRE(back.f.values == st.f.values);
    REQUIRE(back.phi.values == st.phi.values);
    REQUIRE(back.f.grid->r == st.f.grid->r);
    CHECK(back.f.grid->uniform == st.f.grid->uniform);
    CHECK(back.trace.inner_epsilons == st.trace.inner_epsilons);
    CHECK(back.trace.outer_epsilons == st.trace.outer_epsilons);
    CHECK(back.trace.total_inner_iters == st.trace.total_inner_iters);
    CHECK(back.trace.outer_iters == st.trace.outer_iters);
    CHECK(loaded_config.mixing == 0.45);

    fs::remove_all(dir);
}

TEST_CASE("cache key tracks every config field except the level") {
    SolverConfig base;
    const std::string h = config_hash(base);

    SolverConfig other = base;
    other.n = 17;  // different level, same physics settings: same key
    CHECK(config_hash(other) == h);

    std::vector<std::function<void(SolverConfig&)>> tweaks = {
        [](SolverConfig& c) { c.initial_domain = 500.0; },
        [](SolverConfig& c) { c.domain_growth = 1.7; },
        [](SolverConfig& c) { c.inner_tol = 1e-9; },
        [](SolverConfig& c) { c.outer_tol = 1e-5; },
        [](SolverConfig& c) { c.max_inner_iters = 299; },
        [](SolverConfig& c) { c.max_outer_iters = 11; },
        [](SolverConfig& c) { c.points_per_wavelength = 48; },
        [](SolverConfig& c) { c.min_grid_points = 1400; },
        [](SolverConfig& c) { c.max_grid_points = 2000000; },
        [](SolverConfig& c) { c.mixing = 0.4; },
        [](SolverConfig& c) { c.tail_exponent = 25.0; },
        [](SolverConfig& c) { c.integrator = Integrator::rk4; },
        [](SolverConfig& c) { c.quadrature = Quadrature::simpson; },
    };
    for (auto& tweak : tweaks) {
        SolverConfig changed = base;
        tweak(changed);
        CHECK(config_hash(changed) != h);
    }
}

TEST_CASE("state filenames carry the level and the config key") {
    std::string name = state_filename(5, "abc123").string();
    CHECK(name == "state-n5-abc123.json");
}

TEST_CASE("cache round trip hits on the second call and serves the stored bytes") {
    SolverConfig config;
    fs::path dir = fresh_dir("cache");

    bool hit = true;
    EigenState first = solve_cached(config, dir, &hit);
    CHECK_FALSE(hit);
    REQUIRE(first.converged);

    // poison the stored entry; a true cache hit must serve the altered value
    fs::path file = dir / state_filename(config.n, config_hash(config));
    REQUIRE(fs::exists(file));
    SolverConfig stored_config;
    EigenState poisoned = load_state(file, &stored_config);
    poisoned.epsilon = -123.5;
    save_state(poisoned, stored_config, file);

    EigenState second = solve_cached(config, dir, &hit);
    CHECK(hit);
    CHECK(second.epsilon == -123.5);

    fs::remove_all(dir);
}

TEST_CASE("unreadable cache entries are recomputed and repaired") {
    SolverConfig config;
    fs::path dir = fresh_dir("repair");
    fs::path file = dir / state_filename(config.n, config_hash(config));
    {
        std::ofstream out(file);
        out << "{]";
    }
    CHECK_THROWS_AS(load_state(file), ArchiveError);

    bool hit = true;
    EigenState state = solve_cached(config, dir, &hit);
    CHECK_FALSE(hit);
    REQUIRE(state.converged);

    // the bad entry was replaced by the fresh solution
    EigenState reloaded = load_state(file);
    CHECK(reloaded.epsilon == state.epsilon);

    fs::remove_all(dir);
}

TEST_CASE("archive loading reports what is wrong with the file") {
    fs::path dir = fresh_dir("badfiles");
    CHECK_THROWS_WITH_AS(load_state(dir / "missing.json"),
                         doctest::Contains("cannot open"), ArchiveError);

    fs::path alien = dir / "alien.json";
    {
        std::ofstream out(alien);
        out << "{\"format\": \"something-else\", \"version\": 1}";
    }
    CHECK_THROWS_WITH_AS(load_state(alien),
                         doctest::Contains("not a state archive"), ArchiveError);

    fs::remove_all(dir);
}
