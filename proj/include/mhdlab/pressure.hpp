#pragma once

#include <functional>
#include <string>
#include <utility>

namespace mhdlab {

/// Barotropic pressure law p(rho) with the derived constants used by the
/// energy functionals:
///   beta   = p'(1)
///   alpha1 = min{ inf_window p'(s)/s, 1/2 },  alpha2 = max{ sup_window p'(s)/s, 3/2 }
///   Q      = sup over the window of |p^(k)(s)| for k up to deriv_order_cap
/// and the potential energy density e(rho) = 2 rho int_1^rho (p(s)-p(1))/s^2 ds,
/// which vanishes at rho = 1 and is positive elsewhere for increasing p.
struct PressureLaw {
    std::string name;
    std::function<double(double)> p;
    std::function<double(double, int)> deriv; // k-th derivative, k >= 1
    std::function<double(double)> potential;  // e(rho)

    std::pair<double, double> window{0.5, 1.5};
    double beta = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double Q = 0.0;
    int deriv_order_cap = 0;

    double e(double rho) const { return potential(rho); }
    double dp(double rho) const { return deriv(rho, 1); }
};

/// Fills the derived constants by dense sampling of the window (p' checked
/// positive there). When no analytic derivative is supplied, central finite
/// differences are used, with the order cap clamped to 6.
PressureLaw pressure_constants(std::function<double(double)> p,
                               std::function<double(double, int)> deriv,
                               std::pair<double, double> window, int order_cap,
                               int samples = 8193);

/// p(rho) = rho^gamma with analytic derivatives and closed-form e(rho).
PressureLaw make_gamma_law(double gamma, int order_cap = 8);

/// Adaptive Simpson quadrature used by the generic potential (tol 1e-12).
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12);

} // namespace mhdlab
