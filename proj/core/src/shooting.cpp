#include "speigen/shooting.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "speigen/solver.hpp"

namespace speigen {

namespace {

constexpr double renorm_limit = 1e250;
constexpr double renorm_factor = 1e-250;

// First interior value of the outward solution from u(0) = 0, u'(0) = 1:
// u(r) = r + q(0) r³ / 6 + O(r^5).
double first_step(const std::vector<double>& q, double h) {
    return h * (1.0 + q[0] * h * h / 6.0);
}

// Potential term at the midpoint of panel [i, i+1], cubic 4-point
// interpolation where the stencil fits.
double q_mid(const std::vector<double>& q, std::size_t i) {
    if (i == 0 || i + 2 >= q.size())
        return 0.5 * (q[i] + q[i + 1]);
    return (-q[i - 1] + 9.0 * q[i] + 9.0 * q[i + 1] - q[i + 2]) / 16.0;
}

// One RK4 step of (u, w)' = (w, q u) with signed step h and the three
// potential samples along the step.
void rk4_kernel(double h, double qa, double qm, double qb, double& u, double& w) {
    double k1u = w, k1w = qa * u;
    double k2u = w + 0.5 * h * k1w, k2w = qm * (u + 0.5 * h * k1u);
    double k3u = w + 0.5 * h * k2w, k3w = qm * (u + 0.5 * h * k2u);
    double k4u = w + h * k3w, k4w = qb * (u + h * k3u);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
}

}  // namespace

int count_nodes_outward(const std::vector<double>& q, double h, Integrator method) {
    std::size_t N = q.size();
    int nodes = 0;
    if (method == Integrator::numerov) {
        double h2_12 = h * h / 12.0;
        double um = 0.0, u = first_step(q, h);
        double cm = 1.0 - h2_12 * q[0];
        for (std::size_t i = 1; i + 1 < N; ++i) {
            double c = 1.0 - h2_12 * q[i];
            double cp = 1.0 - h2_12 * q[i + 1];
            double up = (u * (2.0 + 10.0 * h2_12 * q[i]) - um * cm) / cp;
            if ((up < 0.0 && u > 0.0) || (up > 0.0 && u < 0.0)) ++nodes;
            else if (up == 0.0 && i + 2 < N) ++nodes;
            um = u; u = up; cm = c;
            if (std::abs(u) > renorm_limit) { u *= renorm_factor; um *= renorm_factor; }
        }
    } else {
        double u = 0.0, w = 1.0;
        for (std::size_t i = 0; i + 1 < N; ++i) {
            double prev = u;
            rk4_kernel(h, q[i], q_mid(q, i), q[i + 1], u, w);
            if ((u < 0.0 && prev > 0.0) || (u > 0.0 && prev < 0.0)) ++nodes;
            else if (u == 0.0 && i + 2 < N) ++nodes;
            if (std::abs(u) > renorm_limit) { u *= renorm_factor; w *= renorm_factor; }
        }
    }
    return nodes;
}

std::size_t outer_turning_index(const std::vector<double>& q) {
    for (std::size_t i = q.size(); i-- > 1;) {
        if (q[i] > 0.0 && q[i - 1] <= 0.0) return i;
    }
    return static_cast<std::size_t>(-1);
}

std::vector<double> glued_eigenfunction(const std::vector<double>& q, double h,
                                        Integrator method) {
    std::size_t N = q.size();
    std::vector<double> u(N, 0.0);
    std::size_t rc = outer_turning_index(q);
    bool have_turn = rc != static_cast<std::size_t>(-1) && rc + 2 < N;
    std::size_t match = have_turn ? rc : N - 1;

    // outward sweep over the oscillatory region (stable there)
    u[0] = 0.0;
    u[1] = first_step(q, h);
    if (method == Integrator::numerov) {
        double h2_12 = h * h / 12.0;
        for (std::size_t i = 1; i < match; ++i) {
            double cp = 1.0 - h2_12 * q[i + 1];
            double cm = 1.0 - h2_12 * q[i - 1];
            u[i + 1] = (u[i] * (2.0 + 10.0 * h2_12 * q[i]) - u[i - 1] * cm) / cp;
        }
    } else {
        double uu = 0.0, w = 1.0;
        for (std::size_t i = 0; i < match; ++i) {
            rk4_kernel(h, q[i], q_mid(q, i), q[i + 1], uu, w);
            u[i + 1] = uu;
        }
    }
    if (!have_turn) return u;  // Dirichlet-wall regime, no forbidden zone

    // inward sweep from the wall; the outward-decaying mode grows in this
    // direction, so integration is stable and the tail comes out clean
    std::vector<double> v(N, 0.0);
    v[N - 1] = 0.0;
    v[N - 2] = 1e-200;
    if (method == Integrator::numerov) {
        double h2_12 = h * h / 12.0;
        for (std::size_t i = N - 2; i > match; --i) {
            double cm = 1.0 - h2_12 * q[i - 1];
            double cp = 1.0 - h2_12 * q[i + 1];
            v[i - 1] = (v[i] * (2.0 + 10.0 * h2_12 * q[i]) - v[i + 1] * cp) / cm;
            if (std::abs(v[i - 1]) > renorm_limit)
                for (std::size_t j = i - 1; j < N; ++j) v[j] *= renorm_factor;
        }
    } else {
        double uu = v[N - 2], w = (v[N - 1] - v[N - 2]) / h;
        for (std::size_t i = N - 2; i > match; --i) {
            rk4_kernel(-h, q[i], q_mid(q, i - 1), q[i - 1], uu, w);
            v[i - 1] = uu;
            if (std::abs(uu) > renorm_limit) {
                for (std::size_t j = i - 1; j < N; ++j) v[j] *= renorm_factor;
                uu *= renorm_factor; w *= renorm_factor;
            }
        }
    }
    double scale = u[match] / v[match];
    for (std::size_t i = match; i < N; ++i) u[i] = v[i] * scale;
    return u;
}

BisectionResult bisect_eigenvalue(const std::vector<double>& v, double h, int n,
                                  double eps_lo, double eps_hi, Integrator method) {
    std::size_t N = v.size();
    std::vector<double> q(N);
    auto count_at = [&](double eps) {
        for (std::size_t i = 0; i < N; ++i) q[i] = v[i] - eps;
        return count_nodes_outward(q, h, method);
    };

    int c_lo = count_at(eps_lo);
    int c_hi = count_at(eps_hi);
    if (c_lo > n || c_hi < n + 1) {
        std::ostringstream msg;
        msg << "eigenvalue bracket not found for n = " << n << ": window ["
            << eps_lo << ", " << eps_hi << "] yields node counts [" << c_lo
            << ", " << c_hi << "]; the domain is likely too small for this level";
        throw SolverError(msg.str());
    }

    BisectionResult res;
    double lo = eps_lo, hi = eps_hi;
    for (int it = 0; it < 240; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket exhausted to ulp
        ++res.iterations;
        if (count_at(mid) <= n) lo = mid; else hi = mid;
    }
    res.epsilon = lo;
    res.bracket_width = hi - lo;
    return res;
}

}  // namespace speigen
