#include "speigen/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace speigen {

namespace {

LawFit make_parabola_law(const char* name, const std::vector<double>& x,
                         const std::vector<double>& y) {
    LawFit law;
    law.name = name;
    if (x.size() < 3) {
        std::ostringstream msg;
        msg << "needs >= 3 states, have " << x.size();
        law.skipped = msg.str();
        return law;
    }
    try {
        law.fit = fit_parabola(x, y);
    } catch (const FitError& e) {
        law.skipped = e.what();
    }
    return law;
}

LawFit make_power_law(const char* name, const std::vector<double>& x,
                      const std::vector<double>& y, std::size_t min_points) {
    LawFit law;
    law.name = name;
    if (x.size() < min_points) {
        std::ostringstream msg;
        msg << "needs >= " << min_points << " states, have " << x.size();
        law.skipped = msg.str();
        return law;
    }
    try {
        law.fit = fit_power_law(x, y);
    } catch (const FitError& e) {
        law.skipped = e.what();
    }
    return law;
}

}  // namespace

HeuristicReport build_heuristic_report(const std::vector<EigenState>& states,
                                       const ReportOptions& options) {
    HeuristicReport report;

    for (const auto& state : states) {
        if (!state.converged) {
            report.failed.push_back({state.n, "solver did not converge"});
            continue;
        }
        StateSummary s;
        s.n = state.n;
        s.epsilon = state.epsilon;
        s.converged = true;
        try {
            EigenFeatures feats = extract_features(state);
            VelocityCurve vel = velocity_curve(state);
            s.support = feats.effective_support;
            if (state.n >= 1) s.outer_node = feats.nodes.back();
            if (state.n >= 2) s.outer_distance = feats.nodal_distances.back();
            if (state.n >= 3) {
                FitResult amp = amplitude_power_law(feats);
                s.amp_coefficient = amp.coefficients[0];
                s.amp_exponent = amp.coefficients[1];
            }
            if (vel.plateau) {
                s.plateau_slope = vel.plateau->coefficients[0];
                s.plateau_intercept = vel.plateau->coefficients[1];
            }
            s.outer_velocity_r = vel.extrema.back().r;
            s.outer_velocity_v = vel.extrema.back().value;
        } catch (const FeatureError& e) {
            report.failed.push_back({state.n, e.what()});
            continue;
        } catch (const FitError& e) {
            report.failed.push_back({state.n, e.what()});
            continue;
        }
        report.states.push_back(std::move(s));
    }
    std::sort(report.states.begin(), report.states.end(),
              [](const StateSummary& a, const StateSummary& b) { return a.n < b.n; });
    std::sort(report.failed.begin(), report.failed.end(),
              [](const FailedState& a, const FailedState& b) { return a.n < b.n; });

    std::vector<double> ns, supports;
    for (const auto& s : report.states) {
        ns.push_back(s.n);
        supports.push_back(s.support);
    }
    report.support_law = make_parabola_law("support", ns, supports);

    std::vector<double> zx, zy;
    for (const auto& s : report.states)
        if (s.outer_node) {
            zx.push_back(s.n);
            zy.push_back(*s.outer_node);
        }
    report.outer_node_law = make_parabola_law("outer_node", zx, zy);

    std::vector<double> dx, dy;
    for (const auto& s : report.states)
        if (s.outer_distance) {
            dx.push_back(s.n);
            dy.push_back(*s.outer_distance);
        }
    report.outer_distance_law = make_parabola_law("outer_distance", dx, dy);

    {
        LawFit law;
        law.name = "amp_exponent";
        std::vector<double> ax, ay;
        for (const auto& s : report.states)
            if (s.amp_exponent && s.n >= options.exponent_min_n) {
                ax.push_back(s.n);
                ay.push_back(*s.amp_exponent);
            }
        if (ax.size() < 3) {
            std::ostringstream msg;
            msg << "needs >= 3 states with n >= " << options.exponent_min_n
                << ", have " << ax.size();
            law.skipped = msg.str();
        } else {
            try {
                law.fit = fit_shifted_power(ax, ay, -1.0);
            } catch (const FitError& e) {
                law.skipped = e.what();
            }
        }
        report.exponent_law = std::move(law);
    }

    std::vector<double> sx, sy;
    for (const auto& s : report.states)
        if (s.plateau_slope && *s.plateau_slope > 0.0) {
            sx.push_back(s.n);
            sy.push_back(*s.plateau_slope);
        }
    report.slope_law = make_power_law("plateau_slope", sx, sy, 3);

    std::vector<double> vx, vy, rn, rr;
    for (const auto& s : report.states) {
        if (s.n >= 1) {
            vx.push_back(s.outer_velocity_r);
            vy.push_back(s.outer_velocity_v);
            rn.push_back(s.n);
            rr.push_back(s.outer_velocity_r);
        }
    }
    report.outer_velocity_law = make_power_law("outer_velocity", vx, vy, 3);
    report.outer_radius_law = make_parabola_law("outer_velocity_radius", rn, rr);

    return report;
}

}  // namespace speigen
