#include "mhdlab/pressure.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace mhdlab {

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double fm, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_step(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

// Central finite difference for the k-th derivative, O(h^2) binomial stencil.
double fd_derivative(const std::function<double(double)>& f, double x, int k) {
    if (k == 0) return f(x);
    const double h = std::pow(1e-10, 1.0 / (k + 2));
    double sum = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= k; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        sum += sign * binom * f(x + (0.5 * k - j) * h);
        binom = binom * (k - j) / (j + 1);
    }
    return sum / std::pow(h, k);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = simpson(a, fa, b, fb, fm);
    return adaptive_step(f, a, fa, b, fb, fm, whole, tol, 48);
}

PressureLaw pressure_constants(std::function<double(double)> p,
                               std::function<double(double, int)> deriv,
                               std::pair<double, double> window, int order_cap, int samples) {
    if (!(window.first > 0.0 && window.second > window.first))
        throw std::invalid_argument("pressure_constants: invalid window");
    PressureLaw law;
    law.name = "custom";
    law.p = p;
    if (deriv) {
        law.deriv = std::move(deriv);
        law.deriv_order_cap = order_cap;
    } else {
        law.deriv = [p](double s, int k) { return fd_derivative(p, s, k); };
        law.deriv_order_cap = std::min(order_cap, 6);
    }
    law.window = window;

    // dense sampling of p'(s)/s over the closed window, with the min/max clamps
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const double s =
            window.first + (window.second - window.first) * double(i) / double(samples - 1);
        const double dp = law.deriv(s, 1);
        if (!(dp > 0.0))
            throw std::invalid_argument("pressure_constants: p' must be positive on the window");
        lo = std::min(lo, dp / s);
        hi = std::max(hi, dp / s);
    }
    law.alpha1 = std::min(lo, 0.5);
    law.alpha2 = std::max(hi, 1.5);
    law.beta = law.deriv(1.0, 1);

    double q = 0.0;
    const int qsamples = 257;
    for (int k = 0; k <= law.deriv_order_cap; ++k)
        for (int i = 0; i < qsamples; ++i) {
            const double s =
                window.first + (window.second - window.first) * double(i) / double(qsamples - 1);
            q = std::max(q, std::abs(k == 0 ? law.p(s) : law.deriv(s, k)));
        }
    law.Q = q;

    if (!law.potential) {
        const auto pf = law.p;
        const double p1 = pf(1.0);
        law.potential = [pf, p1](double rho) {
            const double integral =
                adaptive_simpson([&](double s) { return (pf(s) - p1) / (s * s); }, 1.0, rho, 1e-12);
            return 2.0 * rho * integral;
        };
    }
    return law;
}

PressureLaw make_gamma_law(double gamma, int order_cap) {
    if (gamma <= 0.0) throw std::invalid_argument("make_gamma_law: gamma must be positive");
    auto p = [gamma](double s) { return std::pow(s, gamma); };
    auto deriv = [gamma](double s, int k) {
        double c = 1.0;
        for (int j = 0; j < k; ++j) c *= gamma - j;
        return c * std::pow(s, gamma - k);
    };
    std::function<double(double)> potential;
    if (gamma == 1.0) {
        potential = [](double rho) { return 2.0 * (rho * std::log(rho) - rho + 1.0); };
    } else {
        potential = [gamma](double rho) {
            return 2.0 * (std::pow(rho, gamma) - gamma * rho + gamma - 1.0) / (gamma - 1.0);
        };
    }
    PressureLaw filled = pressure_constants(p, deriv, {0.5, 1.5}, order_cap);
    filled.potential = potential; // closed form replaces the quadrature fallback
    filled.name = "gamma=" + std::to_string(gamma);
    return filled;
}

} // namespace mhdlab
