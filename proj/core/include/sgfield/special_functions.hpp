#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "sgfield/accuracy.hpp"
#include "sgfield/sphere_point.hpp"

namespace sgfield {

/// P_l(t) by the stable three-term recurrence, P_l(1) = 1.
double legendre_p(int ell, double t);

/// P_0(t)..P_{l_max}(t). `out` must have l_max + 1 slots.
void legendre_batch(int l_max, double t, std::span<double> out);
std::vector<double> legendre_batch(int l_max, double t);

/// Orthonormal spherical harmonic Y_lm(theta, phi) with Condon-Shortley phase,
/// normalized so that sum_m conj(Y_lm(x)) Y_lm(y) = (2l+1)/(4pi) P_l(<x,y>).
std::complex<double> spherical_harmonic(int ell, int m, const SpherePoint& point);

/// Streams the orthonormal associated Legendre values Ptilde_l^m(cos theta)
/// for one colatitude: visit(m, l, value) is called for m = 0..l_max,
/// l = m..l_max, in that order. Shared kernel of synthesis and the harmonic
/// least-squares expansion.
template <typename Visitor>
void normalized_legendre_scan(int l_max, double cos_theta, Visitor&& visit) {
    const double x = cos_theta;
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    double pmm = 1.0 / std::sqrt(4.0 * M_PI);
    for (int m = 0; m <= l_max; ++m) {
        if (m > 0) pmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
        double plm2 = pmm;  // l = m
        visit(m, m, plm2);
        if (m == l_max) break;
        double plm1 = std::sqrt(2.0 * m + 3.0) * x * pmm;  // l = m + 1
        visit(m, m + 1, plm1);
        for (int l = m + 2; l <= l_max; ++l) {
            double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
            double lp = l - 1.0;
            double b = std::sqrt((lp * lp - double(m) * m) / (4.0 * lp * lp - 1.0));
            double pl = a * (x * plm1 - b * plm2);
            visit(m, l, pl);
            plm2 = plm1;
            plm1 = pl;
        }
    }
}

/// Mehler-Dirichlet integral for P_l(cos theta), theta in (0, pi):
///   sqrt(2)/pi * int_0^theta cos((l+1/2) psi) / sqrt(cos psi - cos theta) dpsi.
/// The endpoint singularity is removed by x = sin(psi/2)/sin(theta/2) and the
/// result evaluated by Gauss-Chebyshev quadrature with node doubling.
double mehler_dirichlet_p(int ell, double theta, const AccuracyPolicy& policy = {});

/// Li_s(e^{i psi}) for s > 1, psi in (0, 2pi). Near z = 1 (|psi| or |psi-2pi|
/// < 0.5) this dispatches to the series expansion around the origin; otherwise
/// direct summation with an iterated Abel-transformed tail.
std::complex<double> polylog(double s, double psi, const AccuracyPolicy& policy = {});

/// Series expansion of Li_s(e^{i psi}) around psi = 0 (0 < psi < 1):
/// Gamma(1-s)(-i psi)^{s-1} + sum_k zeta(s-k)(i psi)^k / k! for non-integer s,
/// and the harmonic-number/log form for integer s.
std::complex<double> polylog_expansion(double s, double psi, const AccuracyPolicy& policy = {});

/// zeta(s) for s > 1 (Euler-Maclaurin).
double riemann_zeta(double s);

/// H_n = sum_{j=1..n} 1/j, H_0 = 0.
double harmonic_number(int n);

double beta_function(double a, double b);

/// Unnormalized incomplete Beta: int_0^y x^(a-1) (1-x)^(b-1) dx.
double incomplete_beta(double y, double a, double b);

/// B_ln(a,b) = int_0^1 x^(a-1) ln(x) (1-x)^(b-1) dx
///           = B(a,b) (digamma(a) - digamma(a+b)); always negative.
double b_ln(double a, double b);

double digamma(double x);

/// Truncated sum_{l=1..L} l^(-s) P_l(cos theta), s > 1, theta in (0, pi].
/// L is the smallest multipole whose crude tail bound sum_{l>L} l^(-s) meets
/// policy.abs_tol, raised to the oscillation-resolving scale 50/theta; throws
/// BudgetError if that exceeds policy.max_terms. The reported bound is the
/// crude one.
ValueWithTail legendre_series_sum(double s, double theta, const AccuracyPolicy& policy = {});

/// Small-angle asymptotics of S(theta) = sum l^(-s) P_l(cos theta):
/// fits log|zeta(s) - S| against log sin(theta/2) and compares with the
/// predicted order (s-1 for 1<s<3, 2 for s>=3, with a log correction at s=3).
struct SumPolyReport {
    double s = 0.0;
    std::string case_name;       // "1<s<3", "s=3", "s>3"
    double predicted_order = 0.0;
    double fitted_slope = 0.0;
    double fit_residual = 0.0;   // rms residual of the fit, relative to signal rms
    double ratio_s2 = 0.0;       // (zeta(2)-S)/sin(theta/2) at the smallest theta; s=2 only
    std::vector<double> theta;
    std::vector<double> sum;
    std::vector<double> tail_bound;
};

SumPolyReport sum_poly_asymptotic_check(double s, std::span<const double> theta_grid,
                                        const AccuracyPolicy& policy = {});

namespace detail {
/// zeta on the reals, s != 1 (analytic continuation via Euler-Maclaurin).
double zeta_real(double s);
/// Ordinary least squares y ~ a + b x; returns {intercept, slope, rms_residual}.
struct LineFit {
    double intercept;
    double slope;
    double rms_residual;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);
}  // namespace detail

}  // namespace sgfield
