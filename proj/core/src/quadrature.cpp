#include "speigen/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace speigen {

namespace {

bool is_uniform(const std::vector<double>& r) {
    if (r.size() < 2) return false;
    double h = r[1] - r[0];
    for (std::size_t i = 1; i + 1 < r.size(); ++i) {
        double d = r[i + 1] - r[i];
        if (std::abs(d - h) > 1e-9 * h) return false;
    }
    return true;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& r,
                                         const std::vector<double>& y) {
    std::vector<double> out(r.size(), 0.0);
    for (std::size_t i = 1; i < r.size(); ++i)
        out[i] = out[i - 1] + 0.5 * (r[i] - r[i - 1]) * (y[i] + y[i - 1]);
    return out;
}

// Cumulative rule with cubic-accurate interior panels:
//   ∫_{x_i}^{x_{i+1}} y ≈ h/24 (-y_{i-1} + 13 y_i + 13 y_{i+1} - y_{i+2})
// (exact for cubics); end panels use the one-sided parabola (exact for
// quadratics). Uniform spacing required.
std::vector<double> cumulative_parabolic(const std::vector<double>& r,
                                         const std::vector<double>& y) {
    std::size_t N = r.size();
    std::vector<double> out(N, 0.0);
    if (N == 2) return cumulative_trapezoid(r, y);
    double h = r[1] - r[0];
    out[1] = out[0] + h / 12.0 * (5.0 * y[0] + 8.0 * y[1] - y[2]);
    for (std::size_t i = 1; i + 2 < N; ++i)
        out[i + 1] = out[i] + h / 24.0 *
                     (-y[i - 1] + 13.0 * y[i] + 13.0 * y[i + 1] - y[i + 2]);
    out[N - 1] = out[N - 2] + h / 12.0 *
                 (-y[N - 3] + 8.0 * y[N - 2] + 5.0 * y[N - 1]);
    return out;
}

}  // namespace

std::vector<double> cumulative_integral(const std::vector<double>& r,
                                        const std::vector<double>& y,
                                        Quadrature scheme) {
    if (r.size() != y.size())
        throw std::invalid_argument("cumulative_integral: length mismatch");
    if (r.size() < 2)
        throw std::invalid_argument("cumulative_integral: need >= 2 samples");
    if (scheme == Quadrature::simpson) {
        if (!is_uniform(r))
            throw std::invalid_argument(
                "cumulative_integral: simpson scheme needs a uniform grid");
        return cumulative_parabolic(r, y);
    }
    return cumulative_trapezoid(r, y);
}

double total_integral(const std::vector<double>& r, const std::vector<double>& y,
                      Quadrature scheme) {
    return cumulative_integral(r, y, scheme).back();
}

}  // namespace speigen
