#pragma once

#include "mhdlab/spectral_field.hpp"

#include <random>

namespace mhdlab {

/// Mean-zero real random field supported on 0 < |k| <= kmax (Euclidean band).
/// Coefficients are drawn in a fixed lattice order, so a given rng state maps
/// to exactly one field.
SpectralField random_band_limited(const Grid3& g, int kmax, std::mt19937_64& rng);
VectorSpectralField random_band_limited_vector(const Grid3& g, int kmax, std::mt19937_64& rng);

/// Rescale so the physical-grid max abs value equals amp (no-op on zero fields).
void scale_to_linf(SpectralField& f, double amp);
void scale_to_linf(VectorSpectralField& v, double amp);

} // namespace mhdlab
