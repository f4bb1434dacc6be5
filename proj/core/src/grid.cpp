#include "speigen/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace speigen {

std::shared_ptr<const RadialGrid> RadialGrid::make_uniform(double r_max,
                                                           std::size_t points) {
    if (!(r_max > 0.0) || points < 2)
        throw std::invalid_argument("RadialGrid: need r_max > 0 and >= 2 points");
    auto g = std::make_shared<RadialGrid>();
    g->uniform = true;
    g->h = r_max / static_cast<double>(points - 1);
    g->r.resize(points);
    for (std::size_t i = 0; i < points; ++i)
        g->r[i] = static_cast<double>(i) * g->h;
    g->r.back() = r_max;
    return g;
}

std::shared_ptr<const RadialGrid> RadialGrid::make_explicit(std::vector<double> knots) {
    if (knots.size() < 2 || knots.front() != 0.0)
        throw std::invalid_argument("RadialGrid: knots must start at 0");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i] > knots[i - 1]))
            throw std::invalid_argument("RadialGrid: knots must increase strictly");
    auto g = std::make_shared<RadialGrid>();
    g->uniform = false;
    g->h = 0.0;
    g->r = std::move(knots);
    return g;
}

RadialProfile::RadialProfile(GridPtr g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
    if (!grid || values.size() != grid->size())
        throw std::invalid_argument("RadialProfile: values/grid length mismatch");
}

bool same_grid(const GridPtr& a, const GridPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->size() != b->size()) return false;
    if (a->uniform != b->uniform) return false;
    if (a->uniform) return a->h == b->h && a->r_max() == b->r_max();
    return a->r == b->r;
}

void require_same_grid(const RadialProfile& a, const RadialProfile& b,
                       const char* what) {
    if (!same_grid(a.grid, b.grid))
        throw std::invalid_argument(std::string(what) +
                                    ": profiles sampled on different grids");
}

double interpolate(const RadialProfile& p, double x) {
    const auto& r = p.grid->r;
    const auto& y = p.values;
    if (x < r.front() || x > r.back())
        throw std::domain_error("interpolate: radius outside the grid");
    // locate the panel
    std::size_t i;
    if (p.grid->uniform) {
        double t = x / p.grid->h;
        i = static_cast<std::size_t>(t);
        if (i >= r.size() - 1) i = r.size() - 2;
    } else {
        i = static_cast<std::size_t>(
                std::upper_bound(r.begin(), r.end(), x) - r.begin());
        i = (i == 0) ? 0 : i - 1;
        if (i >= r.size() - 1) i = r.size() - 2;
    }
    double hl = r[i + 1] - r[i];
    double t = (x - r[i]) / hl;
    if (i == 0 || i + 2 >= r.size()) {
        return y[i] * (1.0 - t) + y[i + 1] * t;  // linear at the ends
    }
    // Catmull-Rom on four surrounding samples (uniform-spacing form; the
    // solver grids this is used on are uniform)
    double ym = y[i - 1], y0 = y[i], y1 = y[i + 1], y2 = y[i + 2];
    double a0 = y0;
    double a1 = 0.5 * (y1 - ym);
    double a2 = ym - 2.5 * y0 + 2.0 * y1 - 0.5 * y2;
    double a3 = 0.5 * (y2 - ym) + 1.5 * (y0 - y1);
    return a0 + t * (a1 + t * (a2 + t * a3));
}

}  // namespace speigen
