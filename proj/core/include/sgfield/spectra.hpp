#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "sgfield/accuracy.hpp"

namespace sgfield {

/// Scaling function rho_alpha on [0, pi]:
///   t^((alpha-2)/2)        for 2 < alpha < 4
///   t * sqrt(|log t|)      for alpha = 4       (|log| floored at 1)
///   t                      for alpha > 4
/// with rho_alpha(0) = 0 for every alpha.
double rho_alpha(double alpha, double t);

struct ScalingFunction {
    double alpha;
    double operator()(double t) const { return rho_alpha(alpha, t); }
};

/// Angular power spectrum C_l = G(l) * l^(-alpha) for l = 1..l_max, where the
/// envelope G is only assumed bounded: 1/c0 <= G(l) <= c0. The monopole l = 0
/// is excluded throughout.
class PowerSpectrum {
  public:
    /// G == 1, c0 = 1.
    PowerSpectrum(double alpha, int l_max);
    /// Constant envelope g; c0 = max(g, 1/g).
    static PowerSpectrum constant_envelope(double alpha, int l_max, double g);
    /// G(l) = 1 + sin(ln l)/2, a bounded but non-converging envelope; c0 = 2.
    static PowerSpectrum log_oscillation_envelope(double alpha, int l_max);
    /// Arbitrary bounded envelope. The bound c0 is verified by scanning l = 1..l_max.
    static PowerSpectrum custom_envelope(double alpha, int l_max,
                                         std::function<double(int)> envelope, double c0,
                                         std::string envelope_name);

    double alpha() const { return alpha_; }
    int l_max() const { return l_max_; }
    double c0() const { return c0_; }
    double envelope(int ell) const;
    const std::string& envelope_name() const { return envelope_name_; }

    /// C_l. Throws std::out_of_range unless 1 <= ell <= l_max.
    double value(int ell) const;

    /// Same spectral law, re-truncated; envelope bounds are re-verified on
    /// the new range.
    PowerSpectrum with_l_max(int new_l_max) const;

    /// Spectrum of (1 - Laplacian)^(k/2) applied to the field:
    /// C~_l = C_l * (1 + l(l+1))^k, effective index alpha - 2k, envelope bound
    /// c0 * 3^k. Requires alpha > 2 + 2k.
    PowerSpectrum derived(int k) const;

    /// Sum of (2l+1)/(4pi) C_l over l = 1..l_max, with the tail bound
    /// sum_{l > l_max} (2l+1)/(4pi) c0 l^(-alpha).
    ValueWithTail total_variance() const;

    /// Plain-text key=value form (alpha, envelope kind, c0, l_max).
    std::string to_key_value() const;
    static PowerSpectrum from_key_value(std::string_view text);

  private:
    PowerSpectrum() = default;
    void check_envelope_bounds() const;

    double alpha_ = 3.0;
    int l_max_ = 1;
    double c0_ = 1.0;
    std::function<double(int)> envelope_;
    std::string envelope_name_ = "constant";
    double envelope_value_ = 1.0;  // meaningful for the constant kind only
};

/// Multipole needed to resolve the oscillation scale of 1 - P_l(cos theta),
/// which sits at l ~ 1/theta. Used as the default truncation for zonal series
/// evaluated at angle theta.
int recommended_l_max(double theta, int cap = (1 << 20));

}  // namespace sgfield
