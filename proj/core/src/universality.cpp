#include "speigen/universality.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace speigen {

namespace {

double interp_linear(const std::vector<double>& x, const std::vector<double>& y,
                     double xv) {
    auto it = std::upper_bound(x.begin(), x.end(), xv);
    std::size_t j = it == x.begin() ? 1 : static_cast<std::size_t>(it - x.begin());
    if (j >= x.size()) j = x.size() - 1;
    double t = (xv - x[j - 1]) / (x[j] - x[j - 1]);
    return y[j - 1] + t * (y[j] - y[j - 1]);
}

}  // namespace

RescaledCurve rescale_nodal_pattern(const EigenFeatures& features) {
    const int n = features.n;
    if (n < 2) {
        std::ostringstream msg;
        msg << "rescale_nodal_pattern: needs n >= 2, got n = " << n;
        throw FeatureError(msg.str());
    }
    double z_n = features.nodes.back();
    double d_last = features.nodal_distances.back();
    RescaledCurve out;
    out.kind = CurveKind::nodal_pattern;
    out.n = n;
    for (std::size_t i = 0; i + 1 < features.nodes.size(); ++i) {
        out.x.push_back(features.nodes[i + 1] / z_n);
        out.y.push_back(features.nodal_distances[i] / d_last);
    }
    return out;
}

RescaledCurve rescale_velocity(const VelocityCurve& curve, int n) {
    const Extremum& outer = curve.extrema.back();
    RescaledCurve out;
    out.kind = CurveKind::velocity;
    out.n = n;
    const auto& r = curve.v.grid->r;
    out.x.reserve(r.size());
    out.y.reserve(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        out.x.push_back(r[i] / outer.r);
        out.y.push_back(curve.v.values[i] / outer.value);
    }
    return out;
}

double collapse_metric(const std::vector<RescaledCurve>& curves, double x_lo,
                       double x_hi, std::size_t samples) {
    if (curves.size() < 2)
        throw FeatureError("collapse_metric: needs at least two curves");
    if (!(x_lo < x_hi) || samples < 2)
        throw FeatureError("collapse_metric: empty sampling window");
    for (const auto& c : curves) {
        if (c.x.size() < 2)
            throw FeatureError("collapse_metric: curve with fewer than two points");
        if (c.x.front() > x_lo || c.x.back() < x_hi) {
            std::ostringstream msg;
            msg << "collapse_metric: curve for n = " << c.n << " spans ["
                << c.x.front() << ", " << c.x.back()
                << "] which does not cover the window [" << x_lo << ", " << x_hi
                << "]";
            throw FeatureError(msg.str());
        }
    }

    double worst = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        double xv = x_lo + (x_hi - x_lo) * static_cast<double>(s) /
                               static_cast<double>(samples - 1);
        double lo = 0.0, hi = 0.0, sum = 0.0;
        for (std::size_t c = 0; c < curves.size(); ++c) {
            double yv = interp_linear(curves[c].x, curves[c].y, xv);
            if (c == 0) {
                lo = hi = yv;
            } else {
                lo = std::min(lo, yv);
                hi = std::max(hi, yv);
            }
            sum += yv;
        }
        double mean = sum / static_cast<double>(curves.size());
        if (mean == 0.0)
            throw FeatureError("collapse_metric: zero mean across curves");
        worst = std::max(worst, (hi - lo) / std::abs(mean));
    }
    return worst;
}

}  // namespace speigen
