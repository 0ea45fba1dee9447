#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sgfield/field.hpp"
#include "sgfield/slnd.hpp"  // ConstantEstimate
#include "sgfield/spectra.hpp"

namespace sgfield {

/// 2^n points walked along the equator with consecutive arc spacing 2^-n, so
/// that for every k the nearest predecessor is the previous point at distance
/// exactly 2^-n.
struct SeparatedSequence {
    int level = 0;
    std::vector<SpherePoint> points;
};

SeparatedSequence separated_sequence(int n);

enum class StatisticKind { rho_form, geodesic_form, alpha4_form, derivative_form };

StatisticKind statistic_kind_from_string(const std::string& name);
std::string to_string(StatisticKind kind);

/// One evaluated pair: geodesic distance and the field values at both ends.
struct PairSample {
    double distance = 0.0;
    double value_x = 0.0;
    double value_y = 0.0;
};

/// Denominator of the modulus ratio at distance d:
///   rho_form:        rho_alpha(d) sqrt(|log rho_alpha(d)|)
///   geodesic_form:   d^((alpha-2)/2) sqrt(|log d|)
///   alpha4_form:     d |log d|
///   derivative_form: rho_form with alpha replaced by alpha - 2k
/// (|log| floored at 1 throughout).
double modulus_denominator(double alpha, StatisticKind kind, int derivative_k, double d);

/// sup over the pairs of |T(x) - T(y)| / denominator(d).
double modulus_statistic(std::span<const PairSample> pairs, double alpha, StatisticKind kind,
                         int derivative_k = 0);

struct ModulusExperiment {
    PowerSpectrum spectrum;
    std::vector<int> scale_levels;  // scales 2^-j, j strictly increasing
    int replicates = 1;
    int pairs_per_scale = 256;      // random pairs added to the separated-sequence pairs
    StatisticKind kind = StatisticKind::rho_form;
    int derivative_k = 0;           // derivative_form only
    int l_max = 0;                  // 0: min(4096, 50 * 2^j_max)
    std::uint64_t seed = 0;
};

struct ModulusRow {
    double scale = 0.0;
    std::uint64_t replicate = 0;
    double statistic = 0.0;
    bool resolved = true;  // false once scale < 10 / l_max
};

struct ModulusResult {
    std::vector<ModulusRow> rows;  // level-major, replicate-minor
    std::vector<double> scales;
    std::vector<double> median_per_scale;
    std::vector<double> max_per_scale;
    std::vector<bool> resolved_per_scale;
    /// max/min of the per-scale medians.
    double stability_factor = 0.0;
    /// Median over replicates of (rho_form / geodesic_form) on identical
    /// pairs at the finest scale; should sit at sqrt(2/(alpha-2)) ignoring
    /// the |log| floor.
    double norm_ratio_finest = 0.0;
    /// Estimate of the modulus constant: median statistic at the finest
    /// resolved scale (NaN when every scale is under-resolved).
    ConstantEstimate k_estimate;
    /// Per replicate: min over levels of the separated-sequence witness
    /// max_k |T(x_k) - T(x_{k-1})| / (2^(-j(a-2)/2) sqrt(j)).
    std::vector<double> witness_min_per_replicate;
    int l_max = 0;
};

/// Runs the sup-ratio experiment: per (scale, replicate) the statistic over
/// consecutive separated-sequence pairs plus random equator pairs within the
/// scale. Deterministic given (seed, config), independent of thread count.
ModulusResult run_modulus_experiment(const ModulusExperiment& experiment, int threads = 1);

}  // namespace sgfield
