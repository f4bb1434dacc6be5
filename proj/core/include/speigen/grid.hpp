#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace speigen {

/// Radial grid on [0, r_max]. Solver-produced grids are uniform; explicit
/// knot grids are accepted by the quadrature-based operations.
struct RadialGrid {
    std::vector<double> r;
    double h = 0.0;  // spacing, meaningful only when uniform
    bool uniform = true;

    std::size_t size() const { return r.size(); }
    double r_max() const { return r.empty() ? 0.0 : r.back(); }

    static std::shared_ptr<const RadialGrid> make_uniform(double r_max,
                                                          std::size_t points);
    static std::shared_ptr<const RadialGrid> make_explicit(std::vector<double> knots);
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Scalar field sampled on a shared radial grid.
struct RadialProfile {
    GridPtr grid;
    std::vector<double> values;

    RadialProfile() = default;
    RadialProfile(GridPtr g, std::vector<double> v);

    std::size_t size() const { return values.size(); }
    double r(std::size_t i) const { return grid->r[i]; }
};

/// Two profiles may be combined only when sampled on the same axis, either
/// the same grid object or grids with identical knots.
bool same_grid(const GridPtr& a, const GridPtr& b);
void require_same_grid(const RadialProfile& a, const RadialProfile& b,
                       const char* what);

/// Piecewise-cubic (Catmull-Rom) interpolation of a profile at radius x.
/// Falls back to linear near the ends. x must lie inside the grid.
double interpolate(const RadialProfile& p, double x);

}  // namespace speigen
