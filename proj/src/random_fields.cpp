#include "mhdlab/random_fields.hpp"

#include <cmath>
#include <stdexcept>

namespace mhdlab {

SpectralField random_band_limited(const Grid3& g, int kmax, std::mt19937_64& rng) {
    if (kmax < 1 || kmax > g.n / 2 - 1)
        throw std::invalid_argument("random_band_limited: kmax must lie in [1, n/2-1]");
    SpectralField f(g);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int k1 = -kmax; k1 <= kmax; ++k1)
        for (int k2 = -kmax; k2 <= kmax; ++k2)
            for (int k3 = -kmax; k3 <= kmax; ++k3) {
                if (k1 * k1 + k2 * k2 + k3 * k3 > kmax * kmax) continue;
                // one draw per +-k pair: keep the representative with positive
                // first nonzero component
                const bool canonical =
                    k1 > 0 || (k1 == 0 && k2 > 0) || (k1 == 0 && k2 == 0 && k3 > 0);
                if (!canonical) continue;
                const cplx c(gauss(rng), gauss(rng));
                f.at(k1, k2, k3) = c;
                f.at(-k1, -k2, -k3) = std::conj(c);
            }
    return f;
}

VectorSpectralField random_band_limited_vector(const Grid3& g, int kmax, std::mt19937_64& rng) {
    VectorSpectralField v(g);
    for (int i = 0; i < 3; ++i) v[i] = random_band_limited(g, kmax, rng);
    return v;
}

void scale_to_linf(SpectralField& f, double amp) {
    const double m = linf_norm(f);
    if (m == 0.0) return;
    const double c = amp / m;
    for (auto& z : f.coeff) z *= c;
}

void scale_to_linf(VectorSpectralField& v, double amp) {
    double m = 0.0;
    std::array<std::vector<double>, 3> phys{to_physical(v[0]), to_physical(v[1]), to_physical(v[2])};
    for (long i = 0; i < v.grid().size(); ++i) {
        const double mag =
            std::sqrt(phys[0][i] * phys[0][i] + phys[1][i] * phys[1][i] + phys[2][i] * phys[2][i]);
        m = std::max(m, mag);
    }
    if (m == 0.0) return;
    const double c = amp / m;
    for (auto& comp : v.comp)
        for (auto& z : comp.coeff) z *= c;
}

} // namespace mhdlab
