#pragma once

#include <span>
#include <vector>

#include "sgfield/accuracy.hpp"
#include "sgfield/spectra.hpp"

namespace sgfield {

/// Compactly supported even kernel Ghat = q-fold convolution of scaled
/// triangles, supported in (-1, 1), piecewise polynomial of degree 2q - 1.
/// Order 2 is the triangle self-convolution p*p with p(s) = max(0, 1 - 2|s|).
/// Higher orders decay faster under the transform.
class SmoothingKernel {
  public:
    explicit SmoothingKernel(int convolution_order = 2);

    int order() const { return order_; }

    /// Ghat(s); zero for |s| >= 1. Order 2 gives the exact piecewise cubic
    /// with Ghat(0) = 1/3.
    double ghat(double s) const;

    /// Total mass of Ghat: q^(-q).
    double ghat_mass() const { return mass_; }

    /// Closed form of the transform int Ghat(s) e^{-isu} ds:
    /// q^(-q) (sin(u/2q)/(u/2q))^(2q). Nonnegative, decays like u^(-2q).
    double transform(double u) const;

    /// Envelope bound |transform(u)| <= transform_decay_bound() / u^(2q).
    double transform_decay_bound() const { return decay_bound_; }

  private:
    int order_;
    double mass_;
    double decay_bound_;
};

/// Harmonic profile of the zonal bump delta_eps: coefficients
/// b_l(eps) = int Ghat(s) cos(s eps sqrt(l(l+1))) ds, computed by quadrature
/// resolving the oscillation, and the truncated zonal synthesis
/// delta_eps(theta) = sum_l b_l (2l+1)/(4pi) P_l(cos theta).
class BumpProfile {
  public:
    BumpProfile(const SmoothingKernel& kernel, double epsilon, int l_max,
                const AccuracyPolicy& policy = {}, int threads = 1);

    double epsilon() const { return epsilon_; }
    int l_max() const { return l_max_; }
    const SmoothingKernel& kernel() const { return kernel_; }

    double b(int ell) const;
    std::span<const double> coefficients() const { return b_; }  // b_1..b_lmax
    /// kappa_{l0} = sqrt((2l+1)/4pi) b_l; kappa_{lm} = 0 for m != 0.
    double kappa_l0(int ell) const;

    /// Truncated series value with the integration-by-parts tail bound.
    ValueWithTail delta(double theta) const;
    double delta0() const { return delta(0.0).value; }

  private:
    SmoothingKernel kernel_;
    double epsilon_;
    int l_max_;
    std::vector<double> b_;
};

/// Single coefficient by oscillation-resolving quadrature; node count scales
/// with eps*sqrt(l(l+1)). Throws ConvergenceError when refinement disagrees.
double b_ell(const SmoothingKernel& kernel, double epsilon, int ell,
             const AccuracyPolicy& policy = {});

/// (2/pi)^2 (1 - cos(u/2))^2 u^-4, with the series branch near u = 0
/// (limit 1/(16 pi^2)). Proportional to the order-2 operator transform; the
/// proportionality constant is fixed by convention, not used in synthesis.
double g_closed_form(double u);

/// Scale check for delta_eps(0) ~ c3 eps^-2 with
/// c3 = (2pi)^-1 int_0^inf T(u) u du computed from the operator transform.
struct C3Report {
    std::vector<double> epsilon;
    std::vector<double> delta0_eps_sq;  // delta_eps(0) * eps^2
    std::vector<double> ratio;          // delta0_eps_sq / c3
    double c3 = 0.0;
};

C3Report c3_check(const SmoothingKernel& kernel, std::span<const double> epsilon_grid,
                  int l_max, const AccuracyPolicy& policy = {}, int threads = 1);

/// sum_l (2l+1)/(4pi) b_l(eps)^2 / C_l, the denominator of the
/// Cauchy-Schwarz step; grows like eps^-(alpha+2). The span form takes raw
/// coefficients b[0] = b_1, ..., b[l_max-1] = b_{l_max}.
double spectral_weight_sum(const BumpProfile& profile, const PowerSpectrum& spec);
double spectral_weight_sum(std::span<const double> b, const PowerSpectrum& spec);

}  // namespace sgfield
