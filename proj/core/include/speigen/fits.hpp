#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace speigen {

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ordinary least squares result. Coefficient order is documented per fitter;
/// std_errors match the coefficients, r_squared is 1 - RSS/TSS in the space
/// the fit was performed in (log-log for the power-law forms).
struct FitResult {
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    double r_squared = 0.0;
    std::size_t n_points = 0;
    std::string window;
};

/// y = c2 x² + c1 x + c0, coefficients {c2, c1, c0}. Needs >= 3 points.
FitResult fit_parabola(const std::vector<double>& x, const std::vector<double>& y);

/// y = b x^a via log-log OLS, coefficients {b, a}. Needs x, y > 0.
FitResult fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

/// y = m x + q, coefficients {m, q}. Needs >= 2 points.
FitResult fit_linear(const std::vector<double>& x, const std::vector<double>& y);

/// y = asymptote + b x^c fitted on |y - asymptote|, coefficients {b, c}.
/// All residuals y - asymptote must share one sign; offenders are listed in
/// the thrown FitError.
FitResult fit_shifted_power(const std::vector<double>& x, const std::vector<double>& y,
                            double asymptote);

}  // namespace speigen
