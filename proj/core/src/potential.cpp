#include "speigen/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace speigen {

RadialProfile enclosed_profile(const RadialProfile& density, Quadrature scheme) {
    const auto& r = density.grid->r;
    std::vector<double> integrand(r.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        integrand[i] = density.values[i] * r[i] * r[i];
    return RadialProfile(density.grid, cumulative_integral(r, integrand, scheme));
}

double enclosed_integral(const RadialProfile& density, double r, Quadrature scheme) {
    const auto& knots = density.grid->r;
    if (r < 0.0 || r > knots.back())
        throw std::domain_error("enclosed_integral: radius outside the grid");
    RadialProfile m = enclosed_profile(density, scheme);
    auto it = std::upper_bound(knots.begin(), knots.end(), r);
    std::size_t i = static_cast<std::size_t>(it - knots.begin());
    if (i == 0) return 0.0;
    --i;
    if (i + 1 >= knots.size()) return m.values.back();
    // partial last panel by trapezoid on the weighted integrand
    double yi = density.values[i] * knots[i] * knots[i];
    double yi1 = density.values[i + 1] * knots[i + 1] * knots[i + 1];
    double t = (r - knots[i]) / (knots[i + 1] - knots[i]);
    double yr = yi * (1.0 - t) + yi1 * t;
    return m.values[i] + 0.5 * (r - knots[i]) * (yi + yr);
}

RadialProfile poisson_potential(const RadialProfile& density, Quadrature scheme) {
    const auto& r = density.grid->r;
    std::size_t N = r.size();

    std::vector<double> shell(N), line(N);
    for (std::size_t i = 0; i < N; ++i) {
        shell[i] = density.values[i] * r[i] * r[i];
        line[i] = density.values[i] * r[i];
    }
    std::vector<double> A = cumulative_integral(r, shell, scheme);  // ∫_0^r ρ s² ds
    std::vector<double> C = cumulative_integral(r, line, scheme);   // ∫_0^r ρ s ds

    std::vector<double> phi(N);
    phi[0] = -C.back();  // analytic r -> 0 limit
    for (std::size_t i = 1; i < N; ++i)
        phi[i] = -A[i] / r[i] - (C.back() - C[i]);
    return RadialProfile(density.grid, std::move(phi));
}

}  // namespace speigen
