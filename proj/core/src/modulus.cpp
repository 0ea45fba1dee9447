#include "sgfield/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sgfield {

SeparatedSequence separated_sequence(int n) {
    if (n < 1 || n > 20) throw std::domain_error("separated_sequence: requires 1 <= n <= 20");
    SeparatedSequence seq;
    seq.level = n;
    const std::size_t count = std::size_t(1) << n;
    const double step = std::ldexp(1.0, -n);
    seq.points.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
        seq.points.push_back(SpherePoint::from_angles(M_PI / 2.0, double(k) * step));
    return seq;
}

StatisticKind statistic_kind_from_string(const std::string& name) {
    if (name == "rho") return StatisticKind::rho_form;
    if (name == "geodesic") return StatisticKind::geodesic_form;
    if (name == "alpha4") return StatisticKind::alpha4_form;
    if (name == "derivative") return StatisticKind::derivative_form;
    throw std::invalid_argument("unknown statistic kind: " + name);
}

std::string to_string(StatisticKind kind) {
    switch (kind) {
        case StatisticKind::rho_form: return "rho";
        case StatisticKind::geodesic_form: return "geodesic";
        case StatisticKind::alpha4_form: return "alpha4";
        case StatisticKind::derivative_form: return "derivative";
    }
    return "?";
}

double modulus_denominator(double alpha, StatisticKind kind, int derivative_k, double d) {
    if (!(d > 0.0)) throw std::domain_error("modulus_denominator: requires distance > 0");
    switch (kind) {
        case StatisticKind::rho_form: {
            double r = rho_alpha(alpha, d);
            return r * std::sqrt(abs_log(r));
        }
        case StatisticKind::geodesic_form:
            return std::pow(d, 0.5 * (alpha - 2.0)) * std::sqrt(abs_log(d));
        case StatisticKind::alpha4_form:
            return d * abs_log(d);
        case StatisticKind::derivative_form: {
            if (derivative_k < 1)
                throw std::domain_error("modulus_denominator: derivative form needs k >= 1");
            double r = rho_alpha(alpha - 2.0 * derivative_k, d);
            return r * std::sqrt(abs_log(r));
        }
    }
    throw std::logic_error("modulus_denominator: unreachable");
}

double modulus_statistic(std::span<const PairSample> pairs, double alpha, StatisticKind kind,
                         int derivative_k) {
    double sup = 0.0;
    for (const PairSample& p : pairs) {
        double den = modulus_denominator(alpha, kind, derivative_k, p.distance);
        sup = std::max(sup, std::fabs(p.value_x - p.value_y) / den);
    }
    return sup;
}

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    std::size_t mid = v.size() / 2;
    return v.size() % 2 != 0 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

struct ReplicateStats {
    std::vector<double> stat;      // per level, configured kind
    std::vector<double> stat_rho;  // per level
    std::vector<double> stat_geo;  // per level
    double witness_min = 0.0;
};

}  // namespace

ModulusResult run_modulus_experiment(const ModulusExperiment& experiment, int threads) {
    const auto& levels = experiment.scale_levels;
    if (levels.empty()) throw std::domain_error("modulus: need at least one scale level");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] < 1 || levels[i] > 20)
            throw std::domain_error("modulus: scale levels must be in [1, 20]");
        if (i > 0 && levels[i] <= levels[i - 1])
            throw std::domain_error("modulus: scales must be strictly decreasing");
    }
    if (experiment.replicates < 1) throw std::domain_error("modulus: replicates >= 1");
    if (experiment.pairs_per_scale < 0) throw std::domain_error("modulus: pairs_per_scale >= 0");
    if (experiment.kind == StatisticKind::derivative_form && experiment.derivative_k < 1)
        throw std::domain_error("modulus: derivative form needs k >= 1");

    const int j_max = levels.back();
    int l_max = experiment.l_max;
    if (l_max == 0) l_max = std::min(4096, 50 * (1 << j_max));
    if (l_max < 16) throw std::domain_error("modulus: l_max too small");

    const double alpha = experiment.spectrum.alpha();
    const int k = experiment.kind == StatisticKind::derivative_form ? experiment.derivative_k : 0;
    const double alpha_eff = alpha - 2.0 * k;
    if (k > 0 && !(alpha_eff > 2.0))
        throw std::domain_error("modulus: derivative order too high for this alpha");

    PowerSpectrum spec = experiment.spectrum.with_l_max(l_max);

    const std::size_t n_levels = levels.size();
    const int reps = experiment.replicates;
    std::vector<ReplicateStats> per_rep(reps);

    parallel_for(reps, threads, [&](std::int64_t rep) {
        FieldRealization realization = sample_realization(spec, experiment.seed, rep);
        if (k > 0) realization = pseudo_diff(realization, k);
        RingEvaluator ring(realization, M_PI / 2.0);

        ReplicateStats rs;
        rs.stat.resize(n_levels);
        rs.stat_rho.resize(n_levels);
        rs.stat_geo.resize(n_levels);
        rs.witness_min = std::numeric_limits<double>::infinity();

        for (std::size_t li = 0; li < n_levels; ++li) {
            const int j = levels[li];
            const double scale = std::ldexp(1.0, -j);
            std::vector<PairSample> pairs;

            // Consecutive pairs of the separated sequence at this level.
            const std::size_t count = std::size_t(1) << j;
            double prev_phi = 0.0, prev_val = ring(0.0);
            double witness = 0.0;
            for (std::size_t i = 1; i < count; ++i) {
                double phi = double(i) * scale;
                double val = ring(phi);
                pairs.push_back({scale, prev_val, val});
                witness = std::max(witness, std::fabs(val - prev_val));
                prev_phi = phi;
                prev_val = val;
            }
            (void)prev_phi;
            witness /= std::pow(scale, 0.5 * (alpha_eff - 2.0)) * std::sqrt(double(j));
            rs.witness_min = std::min(rs.witness_min, witness);

            // Random equator pairs within the scale.
            RngStream rng(experiment.seed, std::uint64_t(rep), "pairs:j=" + std::to_string(j));
            for (int p = 0; p < experiment.pairs_per_scale; ++p) {
                double center = 2.0 * M_PI * rng.uniform();
                double gap = scale * (0.5 + 0.5 * rng.uniform());
                pairs.push_back({gap, ring(center), ring(center + gap)});
            }

            rs.stat[li] = modulus_statistic(pairs, alpha, experiment.kind, experiment.derivative_k);
            rs.stat_rho[li] = modulus_statistic(pairs, alpha_eff, StatisticKind::rho_form);
            rs.stat_geo[li] = modulus_statistic(pairs, alpha_eff, StatisticKind::geodesic_form);
        }
        per_rep[rep] = std::move(rs);
    });

    ModulusResult result;
    result.l_max = l_max;
    result.rows.resize(n_levels * std::size_t(reps));
    for (std::size_t li = 0; li < n_levels; ++li) {
        const double scale = std::ldexp(1.0, -levels[li]);
        const bool resolved = scale >= 10.0 / double(l_max);
        std::vector<double> stats(reps);
        double max_stat = 0.0;
        for (int rep = 0; rep < reps; ++rep) {
            double s = per_rep[rep].stat[li];
            stats[rep] = s;
            max_stat = std::max(max_stat, s);
            result.rows[li * reps + rep] = {scale, std::uint64_t(rep), s, resolved};
        }
        result.scales.push_back(scale);
        result.median_per_scale.push_back(median(stats));
        result.max_per_scale.push_back(max_stat);
        result.resolved_per_scale.push_back(resolved);
    }

    double med_min = 1e300, med_max = 0.0;
    for (double m : result.median_per_scale) {
        med_min = std::min(med_min, m);
        med_max = std::max(med_max, m);
    }
    result.stability_factor = med_max / med_min;

    {
        std::vector<double> ratios(reps);
        for (int rep = 0; rep < reps; ++rep)
            ratios[rep] = per_rep[rep].stat_rho[n_levels - 1] / per_rep[rep].stat_geo[n_levels - 1];
        result.norm_ratio_finest = median(ratios);
    }

    int finest_resolved = -1;
    for (std::size_t li = 0; li < n_levels; ++li)
        if (result.resolved_per_scale[li]) finest_resolved = int(li);
    double k_hat = std::numeric_limits<double>::quiet_NaN();
    if (finest_resolved >= 0) {
        std::vector<double> stats(reps);
        for (int rep = 0; rep < reps; ++rep) stats[rep] = per_rep[rep].stat[finest_resolved];
        k_hat = median(stats);
    }
    std::ostringstream digest;
    digest << "alpha=" << alpha << ";k=" << k << ";kind=" << to_string(experiment.kind)
           << ";levels=" << levels.front() << ".." << levels.back() << ";replicates=" << reps
           << ";pairs=" << experiment.pairs_per_scale << ";l_max=" << l_max
           << ";seed=" << experiment.seed;
    result.k_estimate = {"K_hat", k_hat, digest.str(), result.scales.back(),
                         result.scales.front()};

    result.witness_min_per_replicate.resize(reps);
    for (int rep = 0; rep < reps; ++rep)
        result.witness_min_per_replicate[rep] = per_rep[rep].witness_min;
    return result;
}

}  // namespace sgfield
