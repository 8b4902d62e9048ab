#pragma once

#include <stdexcept>
#include <string>

namespace mhdlab {

/// Uniform collocation grid for the periodic box [0,1]^3 with n modes per axis.
/// Retained wavenumbers per axis are the standard DFT set [-n/2, n/2), stored
/// in FFT order: index i holds wavenumber i for i < n/2 and i - n otherwise.
struct Grid3 {
    int n;
    int dealias_num;
    int dealias_den;

    explicit Grid3(int n_, int num = 2, int den = 3)
        : n(n_), dealias_num(num), dealias_den(den) {
        if (n < 4 || n % 2 != 0)
            throw std::invalid_argument("Grid3: n must be even and >= 4, got " + std::to_string(n));
        if (num <= 0 || den <= 0 || num >= den)
            throw std::invalid_argument("Grid3: dealias fraction must be a rational in (0,1)");
    }

    bool operator==(const Grid3& o) const { return n == o.n; }
    bool operator!=(const Grid3& o) const { return n != o.n; }

    long size() const { return static_cast<long>(n) * n * n; }

    int wavenumber(int i) const { return i < n / 2 ? i : i - n; }

    int storage_index(int k) const {
        if (k < -n / 2 || k >= n / 2)
            throw std::out_of_range("Grid3: wavenumber outside [-n/2, n/2)");
        return k >= 0 ? k : k + n;
    }

    long flat(int i, int j, int l) const {
        return (static_cast<long>(i) * n + j) * n + l;
    }

    /// Largest kept |k| per axis under the dealias rule (2/3 by default).
    int dealias_cutoff() const { return (n / 2) * dealias_num / dealias_den; }
};

} // namespace mhdlab
