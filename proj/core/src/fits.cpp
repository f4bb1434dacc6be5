#include "speigen/fits.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

namespace speigen {

namespace {

void check_sizes(const std::vector<double>& x, const std::vector<double>& y,
                 std::size_t min_points, const char* who) {
    if (x.size() != y.size()) {
        std::ostringstream msg;
        msg << who << ": x has " << x.size() << " points but y has " << y.size();
        throw FitError(msg.str());
    }
    if (x.size() < min_points) {
        std::ostringstream msg;
        msg << who << ": needs at least " << min_points << " points, got " << x.size();
        throw FitError(msg.str());
    }
}

// OLS with column equilibration; returns coefficients, standard errors and
// R^2 in the space of the supplied design matrix.
FitResult ols(Eigen::MatrixXd A, const Eigen::VectorXd& b) {
    const Eigen::Index m = A.rows(), p = A.cols();
    Eigen::VectorXd scale(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        scale[j] = A.col(j).norm();
        if (scale[j] == 0.0) scale[j] = 1.0;
        A.col(j) /= scale[j];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < p)
        throw FitError("ols: design matrix is rank deficient (degenerate abscissae)");
    Eigen::VectorXd beta = qr.solve(b);

    Eigen::VectorXd resid = b - A * beta;
    double rss = resid.squaredNorm();
    double tss = (b.array() - b.mean()).matrix().squaredNorm();

    double sigma2 = m > p ? rss / static_cast<double>(m - p) : 0.0;
    Eigen::MatrixXd cov = sigma2 * (A.transpose() * A).inverse();

    FitResult out;
    out.n_points = static_cast<std::size_t>(m);
    out.r_squared = tss > 0.0 ? 1.0 - rss / tss : 1.0;
    out.coefficients.resize(p);
    out.std_errors.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        out.coefficients[j] = beta[j] / scale[j];
        out.std_errors[j] = std::sqrt(std::max(cov(j, j), 0.0)) / scale[j];
    }
    return out;
}

Eigen::VectorXd to_vec(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                             static_cast<Eigen::Index>(v.size()));
}

}  // namespace

FitResult fit_parabola(const std::vector<double>& x, const std::vector<double>& y) {
    check_sizes(x, y, 3, "fit_parabola");
    const auto m = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd A(m, 3);
    for (Eigen::Index i = 0; i < m; ++i) {
        double xi = x[static_cast<std::size_t>(i)];
        A(i, 0) = xi * xi;
        A(i, 1) = xi;
        A(i, 2) = 1.0;
    }
    return ols(std::move(A), to_vec(y));
}

FitResult fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
    check_sizes(x, y, 2, "fit_linear");
    const auto m = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd A(m, 2);
    for (Eigen::Index i = 0; i < m; ++i) {
        A(i, 0) = x[static_cast<std::size_t>(i)];
        A(i, 1) = 1.0;
    }
    return ols(std::move(A), to_vec(y));
}

FitResult fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
    check_sizes(x, y, 2, "fit_power_law");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0.0 || y[i] <= 0.0) {
            std::ostringstream msg;
            msg << "fit_power_law: point " << i << " (x = " << x[i] << ", y = "
                << y[i] << ") is not strictly positive";
            throw FitError(msg.str());
        }
    }
    const auto m = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd A(m, 2);
    Eigen::VectorXd b(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = std::log(x[static_cast<std::size_t>(i)]);
        b[i] = std::log(y[static_cast<std::size_t>(i)]);
    }
    FitResult logfit = ols(std::move(A), b);

    FitResult out = logfit;
    out.coefficients = {std::exp(logfit.coefficients[0]), logfit.coefficients[1]};
    // delta method for the prefactor: se(b) = b * se(log b)
    out.std_errors = {out.coefficients[0] * logfit.std_errors[0], logfit.std_errors[1]};
    return out;
}

FitResult fit_shifted_power(const std::vector<double>& x, const std::vector<double>& y,
                            double asymptote) {
    check_sizes(x, y, 2, "fit_shifted_power");
    std::vector<double> d(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) d[i] = y[i] - asymptote;

    double ref = 0.0;
    for (double v : d)
        if (v != 0.0) {
            ref = v;
            break;
        }
    std::vector<std::size_t> offenders;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] == 0.0 || (d[i] > 0.0) != (ref > 0.0)) offenders.push_back(i);
    if (ref == 0.0 || !offenders.empty()) {
        std::ostringstream msg;
        msg << "fit_shifted_power: residuals y - " << asymptote
            << " must share one strict sign; offending points:";
        if (ref == 0.0) {
            msg << " all zero";
        } else {
            for (std::size_t i : offenders)
                msg << " (x = " << x[i] << ", y = " << y[i] << ")";
        }
        throw FitError(msg.str());
    }

    std::vector<double> mag(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) mag[i] = std::abs(d[i]);
    FitResult out = fit_power_law(x, mag);
    if (ref < 0.0) out.coefficients[0] = -out.coefficients[0];
    return out;
}

}  // namespace speigen
