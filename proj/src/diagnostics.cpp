#include "mhdlab/diagnostics.hpp"

#include "mhdlab/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mhdlab {

namespace {
constexpr double two_pi = 6.28318530717958647692528676655900577;

VectorSpectralField cross_with_w(const VectorSpectralField& u, const Vec3& w) {
    const Grid3& g = u.grid();
    VectorSpectralField out(g);
    for (long i = 0; i < g.size(); ++i) {
        const cplx u0 = u[0].coeff[i], u1 = u[1].coeff[i], u2 = u[2].coeff[i];
        out[0].coeff[i] = u1 * w[2] - u2 * w[1];
        out[1].coeff[i] = u2 * w[0] - u0 * w[2];
        out[2].coeff[i] = u0 * w[1] - u1 * w[0];
    }
    return out;
}

SpectralField dot_with_w(const VectorSpectralField& h, const Vec3& w) {
    const Grid3& g = h.grid();
    SpectralField out(g);
    for (long i = 0; i < g.size(); ++i)
        out.coeff[i] = w[0] * h[0].coeff[i] + w[1] * h[1].coeff[i] + w[2] * h[2].coeff[i];
    return out;
}

void check_uniform(const std::vector<double>& t) {
    if (t.size() < 3)
        throw std::invalid_argument("time series: need at least 3 uniformly spaced samples");
    const double dt = t[1] - t[0];
    if (!(dt > 0.0)) throw std::invalid_argument("time series: times must increase");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (std::abs(t[i] - t[i - 1] - dt) > 1e-9 * std::max(1.0, dt))
            throw std::invalid_argument("time series: nonuniform sampling rejected");
}

} // namespace

void OrderParams::validate() const {
    if (L < 1 || M < 1 || N < 1 || d < 1)
        throw std::invalid_argument("OrderParams: L, M, N, d must be positive integers");
    if (r < 0.0) throw std::invalid_argument("OrderParams: r must be nonnegative");
    if (M - r - 1.0 < 0.0)
        throw std::invalid_argument("OrderParams: M - r - 1 must be nonnegative");
    if (L - r < 0.0) throw std::invalid_argument("OrderParams: L - r must be nonnegative");
}

bool OrderParams::asymptotic_regime() const {
    return r > 2.0 && r + 3.0 <= L && L <= M - r - 1.0 && M <= N - r - 2.0 &&
           d > 2.0 * (N + r - L);
}

OrderParams relaxed_orders() { return OrderParams{1, 2, 3, 7, 1.0}; }

double sobolev_energy(const PerturbationState& s, double j) {
    const double na = sobolev_norm(s.a, j);
    const double nu = sobolev_norm(s.u, j);
    const double nh = sobolev_norm(s.h, j);
    return na * na + nu * nu + nh * nh;
}

double physical_energy(const PerturbationState& s, const PressureLaw& pl) {
    const long m = s.grid().size();
    const std::vector<double> a = to_physical(s.a);
    std::array<std::vector<double>, 3> u{to_physical(s.u[0]), to_physical(s.u[1]),
                                         to_physical(s.u[2])};
    double kin = 0.0, pot = 0.0;
    for (long i = 0; i < m; ++i) {
        const double rho = 1.0 + a[i];
        kin += rho * (u[0][i] * u[0][i] + u[1][i] * u[1][i] + u[2][i] * u[2][i]);
        pot += pl.e(rho);
    }
    const double hsq = l2_norm(s.h);
    return 0.5 * (kin / double(m) + pot / double(m) + hsq * hsq);
}

double dissipation_rate(const PerturbationState& s) {
    const Grid3& g = s.grid();
    double sum = 0.0;
    long idx = 0;
    for (int i = 0; i < g.n; ++i) {
        const double k1 = g.wavenumber(i);
        for (int j = 0; j < g.n; ++j) {
            const double k2 = g.wavenumber(j);
            for (int l = 0; l < g.n; ++l, ++idx) {
                const double k3 = g.wavenumber(l);
                const double ksq = k1 * k1 + k2 * k2 + k3 * k3;
                sum += two_pi * two_pi * ksq *
                       (std::norm(s.h[0].coeff[idx]) + std::norm(s.h[1].coeff[idx]) +
                        std::norm(s.h[2].coeff[idx]));
            }
        }
    }
    return sum;
}

double weighted_energy(const PerturbationState& s, const PressureLaw& pl, int N) {
    if (N < 1) throw std::invalid_argument("weighted_energy: N must be >= 1");
    const long m = s.grid().size();
    const std::vector<double> a = to_physical(s.a);
    std::vector<double> w_a(m), w_u(m);
    double total = 0.0;
    for (long i = 0; i < m; ++i) {
        const double rho = 1.0 + a[i];
        if (rho <= pl.window.first || rho >= pl.window.second)
            throw PositivityError(rho, rho, s.time);
        w_a[i] = pl.deriv(rho, 1) / rho;
        w_u[i] = rho;
        total += pl.e(rho);
    }
    total /= double(m);

    // s = 0 block: ||sqrt(rho) u||^2 (physical) + ||h||^2 (spectral)
    for (int c = 0; c < 3; ++c) {
        const std::vector<double> uc = to_physical(s.u[c]);
        double sum = 0.0;
        for (long i = 0; i < m; ++i) sum += w_u[i] * uc[i] * uc[i];
        total += sum / double(m);
    }
    {
        const double nh = l2_norm(s.h);
        total += nh * nh;
    }

    for (int ord = 1; ord <= N; ++ord) {
        const std::vector<double> la = to_physical(lambda_pow(s.a, ord));
        double sum_a = 0.0;
        for (long i = 0; i < m; ++i) sum_a += w_a[i] * la[i] * la[i];
        total += sum_a / double(m);
        for (int c = 0; c < 3; ++c) {
            const std::vector<double> lu = to_physical(lambda_pow(s.u[c], ord));
            double sum_u = 0.0;
            for (long i = 0; i < m; ++i) sum_u += w_u[i] * lu[i] * lu[i];
            total += sum_u / double(m);
            const double nh = l2_norm(lambda_pow(s.h[c], double(ord)));
            total += nh * nh;
        }
    }
    return total;
}

std::array<double, 3> cross_functionals(const PerturbationState& s, const Vec3& w,
                                        const OrderParams& orders) {
    orders.validate();
    const double mr1 = orders.M - orders.r - 1.0;
    const double L = orders.L;
    const double M = orders.M;

    const double c1 = inner_l2(lambda_pow(divergence(s.u), mr1), lambda_pow(s.a, mr1));

    // with w = 0 both w-weighted integrals vanish identically
    if (w[0] == 0.0 && w[1] == 0.0 && w[2] == 0.0) return {c1, 0.0, 0.0};

    const double c2 = inner_l2(w_dot_grad(lambda_pow(s.h, L), w), lambda_pow(s.u, L));

    const VectorSpectralField uxw = cross_with_w(s.u, w);
    const SpectralField hw = dot_with_w(s.h, w);
    const double c3a = inner_l2(div_w(lambda_pow(uxw, M), w), lambda_pow(s.a, M));
    const double c3b = inner_l2(lambda_pow(hw, M), divergence(lambda_pow(s.u, M)));
    return {c1, c2, c3a + c3b};
}

CompositeX composite_X(const PerturbationState& s, const PressureLaw& pl, const Vec3& w,
                       const OrderParams& orders, double delta_star, const Vec3& weights,
                       bool auto_shrink) {
    if (!(delta_star >= 0.0))
        throw std::invalid_argument("composite_X: delta_star must be nonnegative");
    CompositeX out;
    out.X_tilde = weighted_energy(s, pl, orders.N);
    out.e_n = sobolev_energy(s, orders.N);
    out.cross = cross_functionals(s, w, orders);
    const double mix =
        weights[0] * out.cross[0] + weights[1] * out.cross[1] + weights[2] * out.cross[2];

    const double lo = 0.5 * pl.alpha1 * out.e_n;
    const double hi = 2.0 * pl.alpha2 * out.e_n;
    double delta = delta_star;
    double x = out.X_tilde + delta * mix;
    if (auto_shrink) {
        while ((x < lo || x > hi) && delta > 1e-30) {
            delta *= 0.5;
            x = out.X_tilde + delta * mix;
        }
    }
    out.delta_used = delta;
    out.X = x;
    out.bracket_ok = (out.e_n == 0.0) || (lo <= x && x <= hi);
    return out;
}

EnergyReport make_energy_report(const PerturbationState& s, const PressureLaw& pl, const Vec3& w,
                                const OrderParams& orders, double delta_star,
                                const Vec3& weights) {
    EnergyReport r;
    r.t = s.time;
    r.e_phys = physical_energy(s, pl);
    r.dissipation = dissipation_rate(s);
    r.e0 = sobolev_energy(s, 0.0);
    r.e1 = sobolev_energy(s, 1.0);
    r.e3 = sobolev_energy(s, 3.0);
    r.eN = sobolev_energy(s, double(orders.N));
    const CompositeX cx = composite_X(s, pl, w, orders, delta_star, weights, true);
    r.x_tilde = cx.X_tilde;
    r.cross = cx.cross;
    r.X = cx.X;
    r.delta_used = cx.delta_used;
    r.bracket_ok = cx.bracket_ok;
    const ConstraintResiduals cr = constraint_residuals(s);
    r.mass_residual = cr.mass;
    r.momentum_residual = cr.momentum;
    r.mean_h_residual = cr.mean_h;
    r.div_h_l2 = cr.div_h_l2;
    const RhoExtrema ex = rho_extrema(s);
    r.rho_min = ex.min;
    r.rho_max = ex.max;
    return r;
}

std::string energy_csv_header() {
    return "t,E_phys,dissipation,E_0,E_1,E_3,E_N_cfg,X_tilde,cross1,cross2,cross3,X,"
           "mass_residual,momentum_residual_x,momentum_residual_y,momentum_residual_z,"
           "mean_h_residual_x,mean_h_residual_y,mean_h_residual_z,div_h_L2,rho_min,rho_max";
}

std::string energy_csv_row(const EnergyReport& r) {
    const double cols[] = {r.t,
                           r.e_phys,
                           r.dissipation,
                           r.e0,
                           r.e1,
                           r.e3,
                           r.eN,
                           r.x_tilde,
                           r.cross[0],
                           r.cross[1],
                           r.cross[2],
                           r.X,
                           r.mass_residual,
                           r.momentum_residual[0],
                           r.momentum_residual[1],
                           r.momentum_residual[2],
                           r.mean_h_residual[0],
                           r.mean_h_residual[1],
                           r.mean_h_residual[2],
                           r.div_h_l2,
                           r.rho_min,
                           r.rho_max};
    std::string row;
    for (std::size_t i = 0; i < sizeof(cols) / sizeof(cols[0]); ++i) {
        if (i) row += ',';
        row += format_double(cols[i]);
    }
    return row;
}

IdentitySeries energy_identity_residual(const std::vector<double>& t,
                                        const std::vector<double>& e_phys,
                                        const std::vector<double>& dissipation) {
    check_uniform(t);
    if (e_phys.size() != t.size() || dissipation.size() != t.size())
        throw std::invalid_argument("energy_identity_residual: mismatched series lengths");
    const double dt = t[1] - t[0];
    const std::size_t n = t.size();
    IdentitySeries out;
    out.stencil_order = n >= 5 ? 4 : 2;
    double dmax = 0.0;
    for (double d : dissipation) dmax = std::max(dmax, d);
    // Once the dissipation has fallen below a millionth of its peak, the raw
    // quotient divides a round-off-scale numerator by a vanishing denominator;
    // the floor keeps the metric anchored to the scale of the actual balance.
    const double floor = std::max(1e-6 * dmax, std::numeric_limits<double>::min());
    const std::size_t lo = out.stencil_order == 4 ? 2 : 1;
    for (std::size_t i = lo; i + lo < n; ++i) {
        double de;
        if (out.stencil_order == 4)
            de = (-e_phys[i + 2] + 8.0 * e_phys[i + 1] - 8.0 * e_phys[i - 1] + e_phys[i - 2]) /
                 (12.0 * dt);
        else
            de = (e_phys[i + 1] - e_phys[i - 1]) / (2.0 * dt);
        const double rel = std::abs(de + dissipation[i]) / std::max(dissipation[i], floor);
        out.t.push_back(t[i]);
        out.residual_rel.push_back(rel);
        out.max_rel = std::max(out.max_rel, rel);
    }
    return out;
}

MonitorResult dissipation_monitor(const std::vector<double>& t, const std::vector<double>& X,
                                  const std::vector<double>& e_low, double margin) {
    check_uniform(t);
    if (X.size() != t.size() || e_low.size() != t.size())
        throw std::invalid_argument("dissipation_monitor: mismatched series lengths");
    const double dt = t[1] - t[0];
    MonitorResult out;
    double xscale = 0.0;
    for (double x : X) xscale = std::max(xscale, std::abs(x));
    const double slack = 1e-12 * xscale / std::max(dt, 1e-300);
    double mmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        const double dx = (X[i + 1] - X[i - 1]) / (2.0 * dt);
        const double s = dx + margin * e_low[i];
        out.t.push_back(t[i]);
        out.series.push_back(s);
        if (s > slack) {
            out.nonpositive_throughout = false;
            ++out.violations;
        }
        if (e_low[i] > 0.0)
            mmin = std::min(mmin, -dx / e_low[i]);
        else if (dx > slack)
            mmin = std::min(mmin, 0.0);
    }
    out.max_margin = std::isfinite(mmin) ? std::max(mmin, 0.0) : 0.0;
    return out;
}

DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& e) {
    if (t.size() != e.size() || t.size() < 8)
        throw std::invalid_argument("decay_fit: needs at least 8 samples");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (e[i] <= 0.0) throw std::invalid_argument("decay_fit: energies must be positive");
        if (i > 0 && !(t[i] > t[i - 1]))
            throw std::invalid_argument("decay_fit: times must be strictly increasing");
    }
    const std::size_t n = t.size();
    std::vector<double> le(n);
    for (std::size_t i = 0; i < n; ++i) le[i] = std::log(e[i]);

    DecayFit fit;
    double lmin = le[0], lmax = le[0];
    for (double v : le) {
        lmin = std::min(lmin, v);
        lmax = std::max(lmax, v);
    }
    if (lmax - lmin < 1e-12) {
        fit.C = std::exp(le[0]);
        fit.degenerate = true;
        return fit;
    }

    // endpoint slopes of log E initialize (alpha, p)
    const double s0 = -(le[1] - le[0]) / (t[1] - t[0]);
    const double s1 = -(le[n - 1] - le[n - 2]) / (t[n - 1] - t[n - 2]);
    const double span = t[n - 1] - t[0];
    double alpha = (s1 != 0.0 && s0 / s1 > 1.0 + 1e-9) ? (s0 / s1 - 1.0) / span : 1.0 / span;
    alpha = std::clamp(alpha, 1e-9, 1e6);
    double p = std::clamp(std::abs(s0) / alpha, 1e-6, 50.0);
    double lc = le[0];

    auto residual_sq = [&](double lc_, double a_, double p_) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = le[i] - (lc_ - p_ * std::log1p(a_ * t[i]));
            s += r * r;
        }
        return s;
    };

    double best = residual_sq(lc, alpha, p);
    for (int it = 0; it < 200; ++it) {
        // Gauss-Newton on parameters (lc, log alpha, log p)
        double jtj[3][3] = {{0}}, jtr[3] = {0};
        for (std::size_t i = 0; i < n; ++i) {
            const double u = alpha * t[i];
            const double model = lc - p * std::log1p(u);
            const double r = le[i] - model;
            const double j0 = 1.0;
            const double j1 = -p * (t[i] / (1.0 + u)) * alpha; // d model / d log alpha
            const double j2 = -std::log1p(u) * p;              // d model / d log p
            const double jrow[3] = {j0, j1, j2};
            for (int a = 0; a < 3; ++a) {
                jtr[a] += jrow[a] * r;
                for (int b = 0; b < 3; ++b) jtj[a][b] += jrow[a] * jrow[b];
            }
        }
        for (int a = 0; a < 3; ++a) jtj[a][a] += 1e-12;
        // solve 3x3
        double m[3][4];
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) m[a][b] = jtj[a][b];
            m[a][3] = jtr[a];
        }
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int row = col + 1; row < 3; ++row)
                if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
            std::swap(m[col], m[piv]);
            for (int row = 0; row < 3; ++row) {
                if (row == col) continue;
                const double f = m[row][col] / m[col][col];
                for (int b = col; b < 4; ++b) m[row][b] -= f * m[col][b];
            }
        }
        const double step[3] = {m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]};

        double damp = 1.0;
        bool accepted = false;
        for (int half = 0; half < 30; ++half) {
            const double lc2 = lc + damp * step[0];
            const double a2 = std::clamp(alpha * std::exp(damp * step[1]), 1e-9, 1e6);
            const double p2 = std::clamp(p * std::exp(damp * step[2]), 1e-9, 50.0);
            const double r2 = residual_sq(lc2, a2, p2);
            if (r2 <= best) {
                lc = lc2;
                alpha = a2;
                p = p2;
                const double gain = best - r2;
                best = r2;
                accepted = true;
                fit.iterations = it + 1;
                if (gain < 1e-28 * (1.0 + best)) it = 200;
                break;
            }
            damp *= 0.5;
        }
        if (!accepted) break;
    }
    fit.C = std::exp(lc);
    fit.alpha = alpha;
    fit.p = p;
    fit.residual = std::sqrt(best / double(n));
    return fit;
}

InterpolationCheck interpolation_check(const PerturbationState& s, const OrderParams& orders) {
    orders.validate();
    const double N = orders.N, d = orders.d, L = orders.L, r = orders.r;
    const double denom = N + d + r - L;
    InterpolationCheck out;
    out.lhs = sobolev_energy(s, N);
    const double elow = sobolev_energy(s, L - r);
    const double ehigh = sobolev_energy(s, N + d);
    out.rhs = std::pow(elow, d / denom) * std::pow(ehigh, (N + r - L) / denom);
    out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
    return out;
}

} // namespace mhdlab
