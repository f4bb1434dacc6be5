#include "speigen/features.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "speigen/potential.hpp"

namespace speigen {

namespace {

// Vertex of the parabola through three consecutive samples around i.
Extremum refine_vertex(const std::vector<double>& x, const std::vector<double>& y,
                       std::size_t i) {
    double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
    double d1 = (y[i] - y[i - 1]) / (x1 - x0);
    double d2 = (y[i + 1] - y[i]) / (x2 - x1);
    double a = (d2 - d1) / (x2 - x0);
    if (a == 0.0) return {x1, y[i]};
    double xs = 0.5 * (x0 + x1) - d1 / (2.0 * a);
    xs = std::clamp(xs, x0, x2);
    double val = y[i - 1] + d1 * (xs - x0) + a * (xs - x0) * (xs - x1);
    return {xs, val};
}

// Interior extrema of y(x) by sign change of the discrete slope; oscillations
// below the absolute noise floor are ignored.
std::vector<Extremum> scan_extrema(const std::vector<double>& x,
                                   const std::vector<double>& y,
                                   double noise_floor) {
    std::vector<Extremum> out;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        double d1 = y[i] - y[i - 1];
        double d2 = y[i + 1] - y[i];
        if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) {
            Extremum e = refine_vertex(x, y, i);
            if (std::abs(e.value) < noise_floor) continue;
            out.push_back(e);
        }
    }
    return out;
}

}  // namespace

std::vector<double> find_nodes(const RadialProfile& f) {
    const auto& r = f.grid->r;
    const auto& y = f.values;
    std::vector<double> nodes;
    // walk consecutive nonzero samples; runs of exact zeros (underflowed far
    // tail) carry no sign information and are skipped
    std::size_t prev = 0;
    while (prev < y.size() && y[prev] == 0.0) ++prev;
    for (std::size_t i = prev + 1; i < y.size(); ++i) {
        if (y[i] == 0.0) continue;
        if ((y[prev] > 0.0) != (y[i] > 0.0))
            nodes.push_back(r[prev] +
                            (r[i] - r[prev]) * y[prev] / (y[prev] - y[i]));
        prev = i;
    }
    return nodes;
}

std::vector<Extremum> find_extrema(const RadialProfile& f, double noise_floor) {
    std::vector<Extremum> out;
    out.push_back({0.0, f.values[0]});  // central extremum, f'(0) = 0 by parity
    auto interior = scan_extrema(f.grid->r, f.values, noise_floor);
    out.insert(out.end(), interior.begin(), interior.end());
    return out;
}

EigenFeatures extract_features(const EigenState& state) {
    const int n = state.n;
    EigenFeatures out;
    out.n = n;
    out.nodes = find_nodes(state.f);
    if (out.nodes.size() != static_cast<std::size_t>(n)) {
        std::ostringstream msg;
        msg << "node count mismatch: state n = " << n << " but profile has "
            << out.nodes.size() << " interior zeros";
        throw FeatureError(msg.str());
    }

    out.extrema = find_extrema(state.f);
    if (out.extrema.size() != static_cast<std::size_t>(n) + 1) {
        std::ostringstream msg;
        msg << "extremum count mismatch: expected " << n + 1 << ", found "
            << out.extrema.size();
        throw FeatureError(msg.str());
    }
    for (std::size_t i = 0; i + 1 < out.extrema.size(); ++i) {
        double a = out.extrema[i].value, b = out.extrema[i + 1].value;
        if (a == 0.0 || b == 0.0 || (a > 0.0) == (b > 0.0)) {
            std::ostringstream msg;
            msg << "extrema " << i << " and " << i + 1 << " do not alternate in sign";
            throw FeatureError(msg.str());
        }
    }

    // amplitudes decrease strictly up to their minimum; past it a rise is
    // tolerated (turning-region bulge of the outermost arches)
    std::size_t min_idx = 1;
    for (std::size_t i = 1; i < out.extrema.size(); ++i)
        if (std::abs(out.extrema[i].value) < std::abs(out.extrema[min_idx].value))
            min_idx = i;
    for (std::size_t i = 0; i + 1 < out.extrema.size() && i + 1 <= min_idx; ++i) {
        if (std::abs(out.extrema[i].value) <= std::abs(out.extrema[i + 1].value)) {
            std::ostringstream msg;
            msg << "amplitude |f| at extremum " << i + 1
                << " does not decrease before the amplitude minimum";
            throw FeatureError(msg.str());
        }
    }

    // nodes and extrema interlace: r̂_0 < z_1 < r̂_1 < ... < z_n < r̂_n
    for (int i = 0; i < n; ++i) {
        if (!(out.extrema[i].r < out.nodes[i] && out.nodes[i] < out.extrema[i + 1].r)) {
            std::ostringstream msg;
            msg << "node " << i + 1 << " does not interlace the adjacent extrema";
            throw FeatureError(msg.str());
        }
    }

    for (std::size_t i = 1; i < out.nodes.size(); ++i)
        out.nodal_distances.push_back(out.nodes[i] - out.nodes[i - 1]);
    out.effective_support = out.extrema.back().r;

    // tail check: |f| decays monotonically beyond the last extremum
    const auto& r = state.f.grid->r;
    const auto& y = state.f.values;
    std::size_t start = 0;
    while (start < r.size() && r[start] <= out.effective_support) ++start;
    for (std::size_t j = start; j + 1 < r.size(); ++j) {
        if (std::abs(y[j + 1]) > std::abs(y[j]) + 1e-12) {
            std::ostringstream msg;
            msg << "profile is not monotonically decaying beyond its last "
                   "extremum (at r = " << r[j + 1] << ")";
            throw FeatureError(msg.str());
        }
    }
    return out;
}

VelocityCurve velocity_curve(const EigenState& state) {
    const auto& r = state.f.grid->r;
    std::vector<double> f2(state.f.size());
    for (std::size_t i = 0; i < f2.size(); ++i)
        f2[i] = state.f.values[i] * state.f.values[i];
    RadialProfile mass =
        enclosed_profile(RadialProfile(state.f.grid, std::move(f2)),
                         Quadrature::trapezoid);

    VelocityCurve out;
    std::vector<double> v(r.size(), 0.0);
    for (std::size_t i = 1; i < r.size(); ++i)
        v[i] = std::sqrt(std::max(mass.values[i], 0.0) / r[i]);
    out.v = RadialProfile(state.f.grid, std::move(v));

    out.extrema = scan_extrema(r, out.v.values, 0.0);
    std::size_t expected = 2 * static_cast<std::size_t>(state.n) + 1;
    if (out.extrema.size() != expected) {
        std::ostringstream msg;
        msg << "velocity extremum count mismatch: expected " << expected
            << ", found " << out.extrema.size();
        throw FeatureError(msg.str());
    }

    if (state.n >= 3) {
        double lo = out.extrema[2].r;
        double hi = out.extrema[2 * state.n - 2].r;
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < r.size(); ++i)
            if (r[i] >= lo && r[i] <= hi) {
                xs.push_back(r[i]);
                ys.push_back(out.v.values[i]);
            }
        FitResult fit = fit_linear(xs, ys);
        std::ostringstream w;
        w << "r in [" << lo << ", " << hi << "]";
        fit.window = w.str();
        out.plateau = std::move(fit);
    }
    return out;
}

AmplitudeWindow amplitude_fit_window(const EigenFeatures& features) {
    if (features.extrema.size() < 2)
        throw FeatureError("amplitude_fit_window: need at least two extrema");
    std::size_t m = 1;
    for (std::size_t i = 1; i < features.extrema.size(); ++i)
        if (std::abs(features.extrema[i].value) < std::abs(features.extrema[m].value))
            m = i;

    AmplitudeWindow w;
    w.first = 1;
    w.r_min = features.extrema[m].r;
    if (m + 1 == features.extrema.size()) {
        w.monotone = true;  // no interior minimum: use every outer extremum
        w.last = features.extrema.size() - 1;
        return w;
    }
    w.monotone = false;
    w.last = w.first;
    for (std::size_t i = 1; i < features.extrema.size(); ++i)
        if (features.extrema[i].r <= 0.95 * w.r_min) w.last = i;
    return w;
}

FitResult amplitude_power_law(const EigenFeatures& features) {
    if (features.n < 3)
        throw FeatureError("amplitude_power_law: need n >= 3");
    AmplitudeWindow w = amplitude_fit_window(features);
    std::vector<double> xs, ys;
    for (std::size_t i = w.first; i <= w.last; ++i) {
        xs.push_back(features.extrema[i].r);
        ys.push_back(std::abs(features.extrema[i].value));
    }
    FitResult fit = fit_power_law(xs, ys);
    std::ostringstream s;
    s << "extrema " << w.first << ".." << w.last << " (r_min = " << w.r_min
      << (w.monotone ? ", monotone)" : ")");
    fit.window = s.str();
    return fit;
}

}  // namespace speigen
