#include "mhdlab/diophantine.hpp"

#include "mhdlab/random_fields.hpp"

#include <cmath>
#include <limits>

namespace mhdlab {

namespace {

constexpr double two_pi = 6.28318530717958647692528676655900577;

std::array<int, 3> canonical(std::array<int, 3> k) {
    for (int c : k) {
        if (c > 0) return k;
        if (c < 0) return {-k[0], -k[1], -k[2]};
    }
    return k;
}

int norm_sq(const std::array<int, 3>& k) { return k[0] * k[0] + k[1] * k[1] + k[2] * k[2]; }

// Tie order: smaller value, then smaller |k|^2, then lexicographically larger
// canonical representative. Fixes the reported witness among equal minima.
bool better(double val, const std::array<int, 3>& k, double best_val,
            const std::array<int, 3>& best_k) {
    if (val != best_val) return val < best_val;
    const int ns = norm_sq(k), bs = norm_sq(best_k);
    if (ns != bs) return ns < bs;
    return k > best_k;
}

double dot_wk(const Vec3& w, int k1, int k2, int k3) {
    return w[0] * k1 + w[1] * k2 + w[2] * k3;
}

double cross_wk_norm(const Vec3& w, int k1, int k2, int k3) {
    const double c1 = w[1] * k3 - w[2] * k2;
    const double c2 = w[2] * k1 - w[0] * k3;
    const double c3 = w[0] * k2 - w[1] * k1;
    return std::sqrt(c1 * c1 + c2 * c2 + c3 * c3);
}

void check_scan(const Vec3& w, int K, long budget) {
    if (w[0] == 0.0 && w[1] == 0.0 && w[2] == 0.0)
        throw std::invalid_argument("margin scan: w must be nonzero");
    if (K < 1) throw std::invalid_argument("margin scan: K must be >= 1");
    const long count = (2L * K + 1) * (2L * K + 1) * (2L * K + 1);
    if (count > budget)
        throw BudgetError("margin scan: lattice band of " + std::to_string(count) +
                          " points exceeds budget " + std::to_string(budget));
}

template <class Value>
MarginEntry scan_min(const Vec3& w, double r, int K, long budget, Value&& value) {
    check_scan(w, K, budget);
    MarginEntry best{std::numeric_limits<double>::infinity(), {0, 0, 0}};
    for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2)
            for (int k3 = -K; k3 <= K; ++k3) {
                const int ns = k1 * k1 + k2 * k2 + k3 * k3;
                if (ns == 0 || ns > K * K) continue;
                const double val = value(k1, k2, k3) * std::pow(double(ns), 0.5 * r);
                const std::array<int, 3> kc = canonical({k1, k2, k3});
                if (best.argmin == std::array<int, 3>{0, 0, 0} ||
                    better(val, kc, best.margin, best.argmin)) {
                    best.margin = val;
                    best.argmin = kc;
                }
            }
    return best;
}

} // namespace

Vec3 default_diophantine_w(double scale) {
    return {scale, scale * std::sqrt(2.0), scale * std::sqrt(3.0)};
}

MarginEntry dot_margin(const Vec3& w, double r, int K, long budget) {
    return scan_min(w, r, K, budget,
                    [&w](int k1, int k2, int k3) { return std::abs(dot_wk(w, k1, k2, k3)); });
}

MarginEntry cross_margin(const Vec3& w, double r, int K, long budget) {
    return scan_min(w, r, K, budget,
                    [&w](int k1, int k2, int k3) { return cross_wk_norm(w, k1, k2, k3); });
}

MarginReport margin_report(const DioVector& dio, int K, long budget) {
    return {K, dio.r, dot_margin(dio.w, dio.r, K, budget), cross_margin(dio.w, dio.r, K, budget)};
}

std::array<int, 3> tilde_vector(const std::array<int, 3>& k) {
    if (k[2] != 0) return {0, -k[2], k[1]};
    if (k[1] != 0) return {-k[1], k[0], 0};
    return {-k[2], 0, k[0]}; // only k1 nonzero
}

TildeCheckResult tilde_inequality_check(const Vec3& w, int K) {
    if (w[0] == 0.0 && w[1] == 0.0 && w[2] == 0.0)
        throw std::invalid_argument("tilde_inequality_check: w must be nonzero");
    TildeCheckResult res{true, 0, {}};
    for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2)
            for (int k3 = -K; k3 <= K; ++k3) {
                const int ns = k1 * k1 + k2 * k2 + k3 * k3;
                if (ns == 0 || ns > K * K) continue;
                ++res.tested;
                const std::array<int, 3> kt = tilde_vector({k1, k2, k3});
                const double lhs = std::abs(w[0] * kt[0] + w[1] * kt[1] + w[2] * kt[2]);
                const double rhs = cross_wk_norm(w, k1, k2, k3);
                if (lhs > rhs * (1.0 + 1e-14)) {
                    res.ok = false;
                    res.violations.push_back({k1, k2, k3});
                }
            }
    return res;
}

EmpiricalConstants empirical_constants(const Vec3& w, double s, double r, int K, long budget) {
    if (s < r) throw std::invalid_argument("empirical_constants: requires s >= r");
    check_scan(w, K, budget);
    EmpiricalConstants out{s, r, K, true, 0.0, 0.0, 0.0, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2)
            for (int k3 = -K; k3 <= K; ++k3) {
                const int ns = k1 * k1 + k2 * k2 + k3 * k3;
                if (ns == 0 || ns > K * K) continue;
                const double dot = std::abs(dot_wk(w, k1, k2, k3));
                const double cross = cross_wk_norm(w, k1, k2, k3);
                if (dot == 0.0 || cross == 0.0) {
                    out.finite = false;
                    continue;
                }
                const double kabs = std::sqrt(double(ns));
                const double lam_s = std::pow(two_pi * kabs, s);
                const double inhom = std::pow(1.0 + two_pi * two_pi * ns, 0.5 * (s - r));
                const double r1 = std::pow(two_pi * kabs, -r) / (two_pi * dot);
                const double r2 = inhom / (two_pi * cross * lam_s);
                const double r3 = std::max(inhom / (two_pi * dot * lam_s), r2);
                const std::array<int, 3> kc = canonical({k1, k2, k3});
                if (r1 > out.k1) { out.k1 = r1; out.k1_argmax = kc; }
                if (r2 > out.k2) { out.k2 = r2; out.k2_argmax = kc; }
                if (r3 > out.k3) { out.k3 = r3; out.k3_argmax = kc; }
            }
    return out;
}

namespace {

SpectralField single_mode(const Grid3& g, const std::array<int, 3>& k) {
    SpectralField f(g);
    const cplx c(0.7, 0.4);
    f.at(k[0], k[1], k[2]) = c;
    f.at(-k[0], -k[1], -k[2]) = std::conj(c);
    return f;
}

struct Ratios {
    double r1, r2, r3;
};

Ratios field_ratios(const SpectralField& f, const Vec3& w, double s, double r) {
    const SpectralField ls = lambda_pow(f, s);
    const double rhs_dot = l2_norm(w_dot_grad(ls, w));
    const double rhs_cross = l2_norm(w_cross_grad(ls, w));
    const double lhs_hom = l2_norm(lambda_pow(f, s - r));
    const double lhs_inhom = sobolev_norm(f, s - r);
    Ratios out;
    out.r1 = rhs_dot > 0.0 ? lhs_hom / rhs_dot : std::numeric_limits<double>::infinity();
    out.r2 = rhs_cross > 0.0 ? lhs_inhom / rhs_cross : std::numeric_limits<double>::infinity();
    const double r3dot =
        rhs_dot > 0.0 ? lhs_inhom / rhs_dot : std::numeric_limits<double>::infinity();
    out.r3 = std::max(r3dot, out.r2);
    return out;
}

} // namespace

CertificationResult certify_constants(const Grid3& g, const Vec3& w, double s, double r, int K,
                                      int n_samples, std::mt19937_64& rng) {
    if (K > g.n / 2 - 1)
        throw std::invalid_argument("certify_constants: band K does not fit on the grid");
    const EmpiricalConstants ec = empirical_constants(w, s, r, K);
    CertificationResult res{ec, 0.0, 0.0, 0.0, 0};
    if (!ec.finite) return res;

    auto absorb = [&](const SpectralField& f) {
        const Ratios q = field_ratios(f, w, s, r);
        res.max_ratio1 = std::max(res.max_ratio1, q.r1);
        res.max_ratio2 = std::max(res.max_ratio2, q.r2);
        res.max_ratio3 = std::max(res.max_ratio3, q.r3);
        ++res.samples;
    };

    absorb(single_mode(g, ec.k1_argmax));
    absorb(single_mode(g, ec.k2_argmax));
    absorb(single_mode(g, ec.k3_argmax));
    for (int i = 0; i < n_samples; ++i) absorb(random_band_limited(g, K, rng));
    return res;
}

RatioHarnessResult ratio_harness(const Grid3& g, double s, int kmax, int n_samples,
                                 std::mt19937_64& rng) {
    RatioHarnessResult res{0.0, 0.0, 0.0, 0.0, n_samples};
    for (int i = 0; i < n_samples; ++i) {
        SpectralField f = random_band_limited(g, kmax, rng);
        SpectralField h = random_band_limited(g, kmax, rng);
        scale_to_linf(f, 0.8);
        scale_to_linf(h, 0.8);

        // product estimate
        const SpectralField fh = pointwise_product(f, h);
        const double q4 = sobolev_norm(fh, s) /
                          (linf_norm(f) * sobolev_norm(h, s) + linf_norm(h) * sobolev_norm(f, s));
        res.product_ratio_max = std::max(res.product_ratio_max, q4);

        // commutator estimate
        const SpectralField comm = lambda_pow(fh, s) - pointwise_product(f, lambda_pow(h, s));
        const double df_inf = [&] {
            const VectorSpectralField gf = gradient(f);
            std::array<std::vector<double>, 3> p{to_physical(gf[0]), to_physical(gf[1]),
                                                 to_physical(gf[2])};
            double m = 0.0;
            for (long j = 0; j < g.size(); ++j)
                m = std::max(m, std::sqrt(p[0][j] * p[0][j] + p[1][j] * p[1][j] + p[2][j] * p[2][j]));
            return m;
        }();
        const double q5 =
            l2_norm(comm) /
            (df_inf * l2_norm(lambda_pow(h, std::max(s - 1.0, 0.0))) +
             linf_norm(h) * l2_norm(lambda_pow(f, s)));
        res.commutator_ratio_max = std::max(res.commutator_ratio_max, q5);

        // composition estimate with F = sin (F(0) = 0)
        std::vector<double> pf = to_physical(f);
        for (double& x : pf) x = std::sin(x);
        const SpectralField Ff = from_physical(g, pf);
        const double q6 = sobolev_norm(Ff, s) /
                          (std::pow(1.0 + linf_norm(f), std::floor(s) + 1.0) * sobolev_norm(f, s));
        res.composition_ratio_max = std::max(res.composition_ratio_max, q6);

        // weighted Poincare shape: nonnegative weight rho = 1 + f, test field z
        SpectralField z = random_band_limited(g, kmax, rng);
        z.coeff[0] += 0.3;
        SpectralField rho = f;
        rho.coeff[0] += 1.0;
        const double mass = mean_value(rho);
        const double coupling = std::abs(inner_l2(rho, z)) / mass;
        const double defect = l2_norm(f) / mass; // ||mass - rho||_0 = ||f||_0 here
        const double grad_z = l2_norm(gradient(z));
        const double q7 = (l2_norm(z) - coupling) / ((1.0 + defect) * grad_z);
        res.weighted_poincare_ratio_max = std::max(res.weighted_poincare_ratio_max, q7);
    }
    return res;
}

} // namespace mhdlab
