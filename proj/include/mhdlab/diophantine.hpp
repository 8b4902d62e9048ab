#pragma once

#include "mhdlab/spectral_field.hpp"

#include <array>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace mhdlab {

/// Background vector w with its non-resonance exponent r: the condition is
/// |w.k| >= c / |k|^r for every nonzero integer k.
struct DioVector {
    Vec3 w;
    double r;
    std::optional<double> claimed_c;

    DioVector(const Vec3& w_, double r_, std::optional<double> c = std::nullopt)
        : w(w_), r(r_), claimed_c(c) {
        if (w[0] == 0.0 && w[1] == 0.0 && w[2] == 0.0)
            throw std::invalid_argument("DioVector: w must be nonzero");
        if (claimed_c && *claimed_c <= 0.0)
            throw std::invalid_argument("DioVector: claimed_c must be positive");
    }

    // r <= 2 is allowed for exploratory scans; the decay analysis assumes r > 2.
    bool asymptotic_regime() const { return r > 2.0; }
};

/// Default irrational candidate (1, sqrt 2, sqrt 3), optionally scaled.
Vec3 default_diophantine_w(double scale = 1.0);

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MarginEntry {
    double margin;               // min over the band of |w.k| |k|^r (or |w x k| |k|^r)
    std::array<int, 3> argmin;   // canonical representative (first nonzero component > 0)
};

struct MarginReport {
    int band;
    double r;
    MarginEntry dot;
    MarginEntry cross;
};

MarginEntry dot_margin(const Vec3& w, double r, int K, long budget = 300'000'000);
MarginEntry cross_margin(const Vec3& w, double r, int K, long budget = 300'000'000);
MarginReport margin_report(const DioVector& dio, int K, long budget = 300'000'000);

/// Verifies |w . ktilde| <= |w x k| over the band, with ktilde chosen from the
/// last nonzero component of k as in the construction behind the cross bound.
struct TildeCheckResult {
    bool ok;
    long tested;
    std::vector<std::array<int, 3>> violations;
};
TildeCheckResult tilde_inequality_check(const Vec3& w, int K);
std::array<int, 3> tilde_vector(const std::array<int, 3>& k);

/// Sharp band constants of the three Poincare-type inequalities, taken as
/// mode-wise suprema over 0 < |k| <= K:
///   ||Lambda^{s-r} f||_0       <= k1 ||w.grad Lambda^s f||_0
///   ||f||_{s-r}                <= k2 ||(w x grad) Lambda^s f||_0
///   ||f||_{s-r}                <= k3 min(||w.grad Lambda^s f||_0, ||(w x grad) Lambda^s f||_0)
/// finite == false means a resonant mode was found (not Diophantine in band).
struct EmpiricalConstants {
    double s;
    double r;
    int band;
    bool finite;
    double k1, k2, k3;
    std::array<int, 3> k1_argmax, k2_argmax, k3_argmax;
};
EmpiricalConstants empirical_constants(const Vec3& w, double s, double r, int K,
                                       long budget = 300'000'000);

/// Evaluates the three inequalities on the worst single-mode fields plus
/// n_samples random band-limited mean-zero fields, via the norm code path.
struct CertificationResult {
    EmpiricalConstants constants;
    double max_ratio1, max_ratio2, max_ratio3;
    int samples;
};
CertificationResult certify_constants(const Grid3& g, const Vec3& w, double s, double r, int K,
                                      int n_samples, std::mt19937_64& rng);

/// Empirical product/commutator/composition/weighted-Poincare ratio harness.
/// Boundedness of the reported maxima is the assertion, not a specific value.
struct RatioHarnessResult {
    double product_ratio_max;          // ||fg||_s / (||f||_inf ||g||_s + ||g||_inf ||f||_s)
    double commutator_ratio_max;       // ||[L^s,f]g||_0 / (||Df||_inf ||L^{s-1}g||_0 + ||g||_inf ||L^s f||_0)
    double composition_ratio_max;      // ||F(f)||_s / ((1+||f||_inf)^{[s]+1} ||f||_s), F = sin
    double weighted_poincare_ratio_max;
    int samples;
};
RatioHarnessResult ratio_harness(const Grid3& g, double s, int kmax, int n_samples,
                                 std::mt19937_64& rng);

} // namespace mhdlab
