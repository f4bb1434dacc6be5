#include "speigen/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "speigen/archive.hpp"
#include "speigen/exports.hpp"
#include "speigen/features.hpp"
#include "speigen/report.hpp"
#include "speigen/universality.hpp"

namespace speigen {

namespace {

using json = nlohmann::ordered_json;

int parse_int(const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid level number '" + s + "'");
    }
    if (used != s.size())
        throw std::invalid_argument("invalid level number '" + s + "'");
    if (v < 0) throw std::invalid_argument("level numbers must be >= 0");
    return v;
}

struct Gathered {
    std::vector<EigenState> states;  // sorted by n, solved or loaded
    std::vector<FailedState> failures;
    CommandStats stats;
};

// Solve or load every requested n; worker threads when run.jobs > 1. Log
// lines are buffered per level and emitted in order.
Gathered gather_states(const RunConfig& run, std::ostream& log) {
    std::vector<int> ns = run.n_values;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    if (ns.empty()) throw std::invalid_argument("no levels requested");

    std::filesystem::path cache = resolve_cache_dir(run);
    std::filesystem::create_directories(cache);

    struct Slot {
        EigenState state;
        std::string message;
        std::string reason;
        bool ok = false;
        bool hit = false;
    };
    std::vector<Slot> slots(ns.size());
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= ns.size()) return;
            SolverConfig config = run.solver;
            config.n = ns[i];
            std::ostringstream line;
            try {
                bool hit = false;
                slots[i].state = solve_cached(config, cache, &hit);
                slots[i].ok = true;
                slots[i].hit = hit;
                line << "n=" << ns[i] << " epsilon=" << format_double(slots[i].state.epsilon)
                     << (slots[i].state.converged ? "" : " NOT-CONVERGED")
                     << (hit ? " [cached]" : "");
            } catch (const std::exception& e) {
                line << "n=" << ns[i] << " FAILED: " << e.what();
                slots[i].reason = e.what();
            }
            slots[i].message = line.str();
        }
    };

    int jobs = std::max(1, run.jobs);
    if (jobs == 1 || ns.size() == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        int count = std::min<int>(jobs, static_cast<int>(ns.size()));
        for (int t = 0; t < count; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    Gathered out;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        log << slots[i].message << "\n";
        if (!slots[i].ok) {
            out.failures.push_back({ns[i], slots[i].reason});
            ++out.stats.failed;
            continue;
        }
        ++out.stats.solved;
        if (slots[i].hit) ++out.stats.cache_hits;
        if (!slots[i].state.converged) ++out.stats.unconverged;
        out.states.push_back(std::move(slots[i].state));
    }
    return out;
}

std::filesystem::path out_file(const RunConfig& run, const std::string& stem) {
    return run.out_dir / (stem + "." + run.format);
}

double opt_or_nan(const std::optional<double>& v) {
    return v ? *v : std::nan("");
}

json fit_to_json(const FitResult& fit) {
    json j;
    j["coefficients"] = fit.coefficients;
    j["std_errors"] = fit.std_errors;
    j["r_squared"] = fit.r_squared;
    j["n_points"] = fit.n_points;
    if (!fit.window.empty()) j["window"] = fit.window;
    return j;
}

json law_to_json(const LawFit& law) {
    json j;
    j["name"] = law.name;
    if (law.fit)
        j["fit"] = fit_to_json(*law.fit);
    else
        j["skipped"] = law.skipped;
    return j;
}

}  // namespace

std::vector<int> parse_n_spec(const std::string& spec) {
    std::vector<int> out;
    std::size_t pos = 0;
    if (spec.empty()) throw std::invalid_argument("empty level specification");
    while (pos <= spec.size()) {
        std::size_t comma = spec.find(',', pos);
        std::string token = spec.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (token.empty())
            throw std::invalid_argument("empty element in level specification");

        std::size_t dots = token.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_int(token));
        } else {
            std::string rest = token.substr(dots + 2);
            std::size_t colon = rest.find(':');
            int lo = parse_int(token.substr(0, dots));
            int hi = parse_int(colon == std::string::npos ? rest
                                                          : rest.substr(0, colon));
            int step = 1;
            if (colon != std::string::npos) {
                step = parse_int(rest.substr(colon + 1));
                if (step < 1)
                    throw std::invalid_argument("range step must be >= 1");
            }
            if (hi < lo)
                throw std::invalid_argument("range '" + token + "' is descending");
            for (int v = lo; v <= hi; v += step) out.push_back(v);
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::filesystem::path resolve_cache_dir(const RunConfig& run) {
    if (!run.cache_dir.empty()) return run.cache_dir;
    if (const char* env = std::getenv("SP_EIGEN_CACHE"); env && *env)
        return env;
    return "sp-cache";
}

int run_solve(const RunConfig& run, std::ostream& log, CommandStats* stats) {
    Gathered g = gather_states(run, log);
    if (stats) *stats = g.stats;

    std::filesystem::create_directories(run.out_dir);
    Table table;
    table.columns = {"n",           "epsilon",     "converged", "norm_residual",
                     "eq_residual", "grid_points", "r_max",     "outer_iters",
                     "inner_iters"};
    for (const auto& s : g.states)
        table.rows.push_back({static_cast<double>(s.n), s.epsilon,
                              s.converged ? 1.0 : 0.0, s.norm_residual,
                              s.eq_residual, static_cast<double>(s.f.grid->size()),
                              s.f.grid->r_max(),
                              static_cast<double>(s.trace.outer_iters),
                              static_cast<double>(s.trace.total_inner_iters)});
    write_table(table, out_file(run, "states"), run.format);
    log << "wrote " << out_file(run, "states").string() << "\n";

    return g.stats.failed > 0 || g.stats.unconverged > 0 ? exit_partial : exit_ok;
}

int run_features(const RunConfig& run, std::ostream& log) {
    Gathered g = gather_states(run, log);
    std::filesystem::create_directories(run.out_dir);

    int feature_failures = 0;
    for (const auto& state : g.states) {
        std::string suffix = "_n" + std::to_string(state.n);
        try {
            EigenFeatures feats = extract_features(state);
            VelocityCurve vel = velocity_curve(state);

            Table profile;
            profile.columns = {"r", "f", "phi", "v"};
            for (std::size_t i = 0; i < state.f.size(); ++i)
                profile.rows.push_back({state.f.grid->r[i], state.f.values[i],
                                        state.phi.values[i], vel.v.values[i]});
            write_table(profile, out_file(run, "profile" + suffix), run.format);

            Table nodes;
            nodes.columns = {"i", "z"};
            for (std::size_t i = 0; i < feats.nodes.size(); ++i)
                nodes.rows.push_back({static_cast<double>(i + 1), feats.nodes[i]});
            write_table(nodes, out_file(run, "nodes" + suffix), run.format);

            Table dist;
            dist.columns = {"i", "z_right", "d"};
            for (std::size_t i = 0; i < feats.nodal_distances.size(); ++i)
                dist.rows.push_back({static_cast<double>(i + 1), feats.nodes[i + 1],
                                     feats.nodal_distances[i]});
            write_table(dist, out_file(run, "distances" + suffix), run.format);

            Table extrema;
            extrema.columns = {"i", "r", "f"};
            for (std::size_t i = 0; i < feats.extrema.size(); ++i)
                extrema.rows.push_back({static_cast<double>(i),
                                        feats.extrema[i].r, feats.extrema[i].value});
            write_table(extrema, out_file(run, "extrema" + suffix), run.format);

            Table vext;
            vext.columns = {"i", "r", "v"};
            for (std::size_t i = 0; i < vel.extrema.size(); ++i)
                vext.rows.push_back({static_cast<double>(i + 1), vel.extrema[i].r,
                                     vel.extrema[i].value});
            write_table(vext, out_file(run, "velocity_extrema" + suffix), run.format);

            if (state.n >= 2) {
                RescaledCurve pattern = rescale_nodal_pattern(feats);
                Table pat;
                pat.columns = {"Z", "D"};
                for (std::size_t i = 0; i < pattern.x.size(); ++i)
                    pat.rows.push_back({pattern.x[i], pattern.y[i]});
                write_table(pat, out_file(run, "pattern" + suffix), run.format);
            }
            log << "n=" << state.n << " features written\n";
        } catch (const std::exception& e) {
            log << "n=" << state.n << " feature extraction FAILED: " << e.what()
                << "\n";
            ++feature_failures;
        }
    }
    return g.stats.failed > 0 || g.stats.unconverged > 0 || feature_failures > 0
               ? exit_partial
               : exit_ok;
}

int run_report(const RunConfig& run, std::ostream& log) {
    Gathered g = gather_states(run, log);
    std::filesystem::create_directories(run.out_dir);

    HeuristicReport report = build_heuristic_report(g.states);
    for (const auto& f : g.failures) report.failed.push_back(f);
    std::sort(report.failed.begin(), report.failed.end(),
              [](const FailedState& a, const FailedState& b) { return a.n < b.n; });

    json j;
    j["format"] = "sp-eigen-report";
    j["version"] = 1;
    json states = json::array();
    for (const auto& s : report.states) {
        json e;
        e["n"] = s.n;
        e["epsilon"] = s.epsilon;
        e["support"] = s.support;
        if (s.outer_node) e["outer_node"] = *s.outer_node;
        if (s.outer_distance) e["outer_distance"] = *s.outer_distance;
        if (s.amp_coefficient) e["amp_coefficient"] = *s.amp_coefficient;
        if (s.amp_exponent) e["amp_exponent"] = *s.amp_exponent;
        if (s.plateau_slope) e["plateau_slope"] = *s.plateau_slope;
        if (s.plateau_intercept) e["plateau_intercept"] = *s.plateau_intercept;
        e["outer_velocity_r"] = s.outer_velocity_r;
        e["outer_velocity_v"] = s.outer_velocity_v;
        states.push_back(e);
    }
    j["states"] = states;
    json failed = json::array();
    for (const auto& f : report.failed) {
        json e;
        e["n"] = f.n;
        e["reason"] = f.reason;
        failed.push_back(e);
    }
    j["failed"] = failed;
    j["laws"] = json::array({law_to_json(report.support_law),
                             law_to_json(report.outer_node_law),
                             law_to_json(report.outer_distance_law),
                             law_to_json(report.exponent_law),
                             law_to_json(report.slope_law),
                             law_to_json(report.outer_velocity_law),
                             law_to_json(report.outer_radius_law)});

    std::filesystem::path report_file = run.out_dir / "report.json";
    {
        std::ofstream out(report_file, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open " + report_file.string());
        out << j.dump(1) << "\n";
    }
    log << "wrote " << report_file.string() << "\n";

    Table summary;
    summary.columns = {"n",       "epsilon",     "support",
                       "outer_node", "outer_distance", "amp_coefficient",
                       "amp_exponent", "plateau_slope", "plateau_intercept",
                       "outer_velocity_r", "outer_velocity_v"};
    for (const auto& s : report.states)
        summary.rows.push_back({static_cast<double>(s.n), s.epsilon, s.support,
                                opt_or_nan(s.outer_node), opt_or_nan(s.outer_distance),
                                opt_or_nan(s.amp_coefficient),
                                opt_or_nan(s.amp_exponent),
                                opt_or_nan(s.plateau_slope),
                                opt_or_nan(s.plateau_intercept),
                                s.outer_velocity_r, s.outer_velocity_v});
    write_table(summary, out_file(run, "summary"), run.format);
    log << "wrote " << out_file(run, "summary").string() << "\n";

    return g.stats.failed > 0 || g.stats.unconverged > 0 ? exit_partial : exit_ok;
}

int run_validate(const RunConfig& run, std::ostream& log) {
    Gathered g = gather_states(run, log);
    std::filesystem::create_directories(run.out_dir);

    Table table;
    table.columns = {"n",
                     "epsilon_rel_change",
                     "max_node_rel_change",
                     "max_extremum_pos_rel_change",
                     "max_extremum_amp_rel_change",
                     "threshold",
                     "reliable"};
    int flagged = 0;
    for (const auto& state : g.states) {
        try {
            ResolutionReport rep = validate_resolution(state, run.solver);
            table.rows.push_back({static_cast<double>(state.n),
                                  rep.epsilon_rel_change, rep.max_node_rel_change,
                                  rep.max_extremum_pos_rel_change,
                                  rep.max_extremum_amp_rel_change, rep.threshold,
                                  rep.reliable ? 1.0 : 0.0});
            log << "n=" << state.n
                << (rep.reliable ? " resolution OK" : " resolution SUSPECT")
                << " (d_eps=" << format_double(rep.epsilon_rel_change) << ")\n";
            if (!rep.reliable) ++flagged;
        } catch (const std::exception& e) {
            log << "n=" << state.n << " validation FAILED: " << e.what() << "\n";
            ++flagged;
        }
    }
    write_table(table, out_file(run, "validate"), run.format);
    log << "wrote " << out_file(run, "validate").string() << "\n";
    return g.stats.failed > 0 || flagged > 0 ? exit_partial : exit_ok;
}

int run_collapse(const RunConfig& run, std::ostream& log) {
    Gathered g = gather_states(run, log);
    std::filesystem::create_directories(run.out_dir);

    std::vector<RescaledCurve> velocity, patterns;
    int feature_failures = 0;
    for (const auto& state : g.states) {
        try {
            EigenFeatures feats = extract_features(state);
            VelocityCurve vel = velocity_curve(state);
            velocity.push_back(rescale_velocity(vel, state.n));
            if (state.n >= 2) patterns.push_back(rescale_nodal_pattern(feats));
        } catch (const std::exception& e) {
            log << "n=" << state.n << " skipped: " << e.what() << "\n";
            ++feature_failures;
        }
    }

    Table table;
    table.columns = {"kind", "curves", "x_lo", "x_hi", "metric"};
    bool any_metric = false;

    if (velocity.size() >= 2) {
        double metric = collapse_metric(velocity, 0.1, 1.0);
        table.rows.push_back(
            {0.0, static_cast<double>(velocity.size()), 0.1, 1.0, metric});
        log << "velocity collapse over [0.1, 1]: "
            << format_double(metric) << " (" << velocity.size() << " curves)\n";
        any_metric = true;
    } else {
        log << "velocity collapse skipped: needs >= 2 curves\n";
    }

    if (patterns.size() >= 2) {
        double lo = 0.0, hi = 1.0;
        for (const auto& c : patterns) lo = std::max(lo, c.x.front());
        if (lo < hi) {
            double metric = collapse_metric(patterns, lo, hi);
            table.rows.push_back(
                {1.0, static_cast<double>(patterns.size()), lo, hi, metric});
            log << "nodal pattern collapse over [" << format_double(lo)
                << ", 1]: " << format_double(metric) << " (" << patterns.size()
                << " curves)\n";
            any_metric = true;
        }
    } else {
        log << "nodal pattern collapse skipped: needs >= 2 curves with n >= 2\n";
    }

    write_table(table, out_file(run, "collapse"), run.format);
    log << "wrote " << out_file(run, "collapse").string() << "\n";

    if (!any_metric) return exit_usage;
    return g.stats.failed > 0 || feature_failures > 0 ? exit_partial : exit_ok;
}

}  // namespace speigen
