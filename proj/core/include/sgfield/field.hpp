#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "sgfield/rng.hpp"
#include "sgfield/spectra.hpp"
#include "sgfield/sphere_point.hpp"

namespace sgfield {

/// Random spherical-harmonic coefficients a_lm of one realization,
/// 1 <= l <= l_max, with the real-field symmetry
///   a_{l,-m} = (-1)^m conj(a_{lm}),  Im a_{l0} = 0,
/// so only m >= 0 is stored; m < 0 is derived on access.
class HarmonicCoefficients {
  public:
    explicit HarmonicCoefficients(int l_max);

    int l_max() const { return l_max_; }

    std::complex<double> get(int ell, int m) const;
    /// m >= 0 only; rejects a nonreal a_{l0}.
    void set(int ell, int m, std::complex<double> value);

    /// Storage for m >= 0, packed (l,m) with m ascending within l ascending.
    std::span<const std::complex<double>> packed() const { return a_; }
    std::span<std::complex<double>> packed() { return a_; }

    static std::size_t packed_index(int ell, int m) {
        return std::size_t(ell) * (ell + 1) / 2 - 1 + m;
    }

  private:
    void check_range(int ell, int m) const;
    int l_max_;
    std::vector<std::complex<double>> a_;
};

/// One sampled field: coefficients plus the spectrum and stream identifiers
/// they were drawn from. `derivative_order` counts applications of
/// (1 - Laplacian)^(1/2); `variance_warning` marks a derivative order whose
/// infinite series would have infinite variance (finite here by truncation).
struct FieldRealization {
    HarmonicCoefficients coefficients;
    PowerSpectrum spectrum;
    std::uint64_t seed = 0;
    std::uint64_t replicate = 0;
    int derivative_order = 0;
    bool variance_warning = false;
};

/// Independent zero-mean Gaussians with E|a_lm|^2 = C_l: a_{l0} real with
/// variance C_l; for m > 0 real and imaginary parts independent with variance
/// C_l/2 each. Draw order is fixed (l ascending, m ascending).
HarmonicCoefficients sample_coefficients(const PowerSpectrum& spec, RngStream& rng);

FieldRealization sample_realization(const PowerSpectrum& spec, std::uint64_t seed,
                                    std::uint64_t replicate);

/// T(x) = sum_lm a_lm Y_lm(x), real by the coefficient symmetry.
double evaluate_at(const FieldRealization& realization, const SpherePoint& point);
std::vector<double> evaluate(const FieldRealization& realization,
                             std::span<const SpherePoint> points, int threads = 1);

/// Schoenberg series sum_l (2l+1)/(4pi) C_l P_l(cos theta), with tail bound.
ValueWithTail covariance_at_angle(const PowerSpectrum& spec, double theta);
ValueWithTail covariance(const PowerSpectrum& spec, const SpherePoint& x, const SpherePoint& y);

/// (1 - Laplacian)^(k/2): scales a_lm by (1 + l(l+1))^(k/2). The result's
/// spectrum is derived(k) when alpha > 2 + 2k; otherwise the base spectrum is
/// kept and variance_warning is set.
FieldRealization pseudo_diff(const FieldRealization& realization, int k);

/// Evaluates one realization along a circle of fixed colatitude in O(l_max)
/// per longitude after an O(l_max^2) setup. Exact, not an approximation:
/// T(phi) = Re g_0 + 2 sum_m Re[g_m e^{im phi}] with
/// g_m = sum_l a_lm Ptilde_l^m(cos theta).
class RingEvaluator {
  public:
    RingEvaluator(const FieldRealization& realization, double colatitude);
    double operator()(double phi) const;

  private:
    std::vector<std::complex<double>> g_;
};

}  // namespace sgfield
