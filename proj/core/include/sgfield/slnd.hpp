#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sgfield/field.hpp"
#include "sgfield/spectra.hpp"
#include "sgfield/sphere_point.hpp"

namespace sgfield {

/// Prediction problem: variance of T(x0) given T at the conditioning points.
struct ConditioningConfig {
    SpherePoint x0;
    std::vector<SpherePoint> points;
    PowerSpectrum spectrum;
};

/// Var(T(x0) | T(x_1..n)) = sigma00 - c^T Sigma^+ c via a symmetric
/// eigen-solve; eigenvalues below 1e-10 * trace are dropped (pseudo-inverse),
/// and an eigenvalue below the negative of that cutoff signals a covariance
/// assembly bug (ConsistencyError). Duplicated points are fine.
double conditional_variance(const ConditioningConfig& config);

/// Independent oracle: rotates x0 to the North Pole and minimizes
/// sum_{l,m} C_l |Y_lm(pole) - sum_j gamma_j Y_lm(x_j)|^2 over real gamma by
/// weighted least squares on the explicit harmonic expansion. Agrees with
/// conditional_variance at the same truncation.
double quadratic_form_min(const ConditioningConfig& config);

/// An empirically estimated constant standing in for one of the theory's
/// nonconstructive constants, with enough provenance to reproduce it.
struct ConstantEstimate {
    std::string name;
    double value = 0.0;
    std::string config_digest;
    double scale_min = 0.0;
    double scale_max = 0.0;
};

enum class SlndGeometry { ring, random_cap, adversarial };

SlndGeometry slnd_geometry_from_string(const std::string& name);
std::string to_string(SlndGeometry geometry);

struct SlndRow {
    double epsilon = 0.0;
    std::uint64_t replicate = 0;
    double min_dist = 0.0;
    double var = 0.0;
    double ratio_c2 = 0.0;  // var / eps^(alpha-2)
    double ratio_nd = 0.0;  // var / rho_alpha(min_dist)^2
};

struct SlndScanResult {
    std::vector<SlndRow> rows;
    std::vector<double> epsilon;
    std::vector<double> min_ratio_c2;   // per epsilon
    std::vector<double> min_ratio_nd;   // per epsilon
    double slope_log_min_ratio = 0.0;   // d log(min ratio_c2) / d log eps
    ConstantEstimate c2_estimate;
    bool exploratory = false;           // alpha >= 4 run, non-certifying
};

/// Samples conditioning geometries with min distance eps from x0 (ring:
/// exactly eps; random_cap: one point at eps, the rest in [eps, 3eps];
/// adversarial: all crowded into a narrow longitude sector at [eps, 2eps])
/// and reports the SLND ratios per (eps, replicate). The series truncation is
/// min(4096, ceil(50/eps)) per eps. alpha >= 4 requires `exploratory`.
SlndScanResult slnd_scan(double alpha, std::span<const double> epsilon_grid, int n,
                         SlndGeometry geometry, int replicates, std::uint64_t seed,
                         int threads = 1, bool exploratory = false);

}  // namespace sgfield
