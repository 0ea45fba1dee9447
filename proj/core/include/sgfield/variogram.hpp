#pragma once

#include <span>
#include <vector>

#include "sgfield/spectra.hpp"

namespace sgfield {

/// Variogram d_T^2(theta) = sum_l C_l (2l+1)/(2pi) (1 - P_l(cos theta)),
/// truncated at the spectrum's l_max, with tail bound
/// 2 sum_{l>l_max} (2l+1)/(2pi) c0 l^(-alpha). Equals
/// 2 (covariance(0) - covariance(theta)) at the same truncation.
ValueWithTail variogram(const PowerSpectrum& spec, double theta);

/// Q_alpha(theta) = sum_l l^(-alpha) (l + 1/2) (1 - P_l(cos theta)),
/// truncated at l_max; for G == 1, variogram = Q_alpha / pi exactly.
ValueWithTail q_alpha(double alpha, double theta, int l_max);

/// Small-scale sandwich diagnostics: the ratio d_T^2 / rho_alpha^2 over a
/// theta grid, the implied two-sided constant estimate, and a flag raised when
/// the ratio drifts like a power of theta (|log-log slope| > 0.1).
struct VariogramProfile {
    double alpha = 0.0;
    std::vector<double> theta;
    std::vector<double> value;       // d_T^2
    std::vector<double> rho_sq;      // rho_alpha(theta)^2
    std::vector<double> ratio;       // value / rho_sq
    std::vector<double> tail_bound;
    double c1_estimate = 0.0;        // max(max ratio, 1/min ratio)
    double ratio_slope = 0.0;
    bool ratio_unbounded_flag = false;
};

VariogramProfile sandwich_report(const PowerSpectrum& spec, std::span<const double> theta_grid);

}  // namespace sgfield
