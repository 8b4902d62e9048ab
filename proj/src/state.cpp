#include "mhdlab/state.hpp"

#include "mhdlab/random_fields.hpp"

#include <cmath>

namespace mhdlab {

ConstraintResiduals constraint_residuals(const PerturbationState& s) {
    ConstraintResiduals r;
    r.mass = std::abs(mean_value(s.a));
    const std::vector<double> a = to_physical(s.a);
    const long m = s.grid().size();
    for (int c = 0; c < 3; ++c) {
        const std::vector<double> uc = to_physical(s.u[c]);
        double sum = 0.0;
        for (long i = 0; i < m; ++i) sum += (1.0 + a[i]) * uc[i];
        r.momentum[c] = sum / double(m);
        r.mean_h[c] = mean_value(s.h[c]);
    }
    r.div_h_l2 = l2_norm(divergence(s.h));
    return r;
}

RhoExtrema rho_extrema(const PerturbationState& s) {
    const std::vector<double> a = to_physical(s.a);
    RhoExtrema e{1.0 + a[0], 1.0 + a[0]};
    for (double x : a) {
        e.min = std::min(e.min, 1.0 + x);
        e.max = std::max(e.max, 1.0 + x);
    }
    return e;
}

PerturbationState prepare_initial_data(const SpectralField& a0, const VectorSpectralField& u0,
                                       const VectorSpectralField& h0,
                                       std::pair<double, double> window) {
    if (a0.grid != u0.grid() || a0.grid != h0.grid())
        throw std::invalid_argument("prepare_initial_data: fields on mismatched grids");
    PerturbationState s(a0.grid);
    s.a = truncated(a0);
    s.u = u0;
    s.h = h0;
    truncate_to_band(s.u);
    truncate_to_band(s.h);

    s.a.coeff[0] = cplx(0.0, 0.0); // integral rho = 1

    for (int c = 0; c < 3; ++c) s.h[c].coeff[0] = cplx(0.0, 0.0);
    s.h = leray_project(s.h);

    // remove the momentum mean; integral rho = 1 after centering
    const ConstraintResiduals r = constraint_residuals(s);
    for (int c = 0; c < 3; ++c) s.u[c].coeff[0] -= r.momentum[c];

    const RhoExtrema e = rho_extrema(s);
    if (e.min <= window.first || e.max >= window.second)
        throw PositivityError(e.min, e.max, 0.0);
    return s;
}

PerturbationState make_initial_state(const Grid3& g, const InitSpec& init,
                                     std::pair<double, double> window) {
    switch (init.kind) {
        case InitSpec::Kind::zero:
            return PerturbationState(g);
        case InitSpec::Kind::single_h_mode: {
            const auto& k = init.mode;
            const int c = init.component;
            if (c < 0 || c > 2 ||
                k[0] * (c == 0) + k[1] * (c == 1) + k[2] * (c == 2) != 0)
                throw std::invalid_argument(
                    "make_initial_state: single_h_mode component must be perpendicular to the mode");
            SpectralField a0(g);
            VectorSpectralField u0(g), h0(g);
            h0[c].at(k[0], k[1], k[2]) = 0.5 * init.amplitude;
            h0[c].at(-k[0], -k[1], -k[2]) = 0.5 * init.amplitude;
            return prepare_initial_data(a0, u0, h0, window);
        }
        case InitSpec::Kind::random: {
            std::mt19937_64 rng(init.seed);
            SpectralField a0 = random_band_limited(g, init.kmax, rng);
            VectorSpectralField u0 = random_band_limited_vector(g, init.kmax, rng);
            VectorSpectralField h0 = random_band_limited_vector(g, init.kmax, rng);
            scale_to_linf(a0, init.amplitude);
            scale_to_linf(u0, init.amplitude);
            scale_to_linf(h0, init.amplitude);
            return prepare_initial_data(a0, u0, h0, window);
        }
    }
    throw std::logic_error("make_initial_state: unknown init kind");
}

} // namespace mhdlab
