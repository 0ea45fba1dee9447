#include "sgfield/slnd.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sgfield/special_functions.hpp"

namespace sgfield {

double conditional_variance(const ConditioningConfig& config) {
    const int n = int(config.points.size());
    if (n < 1) throw std::domain_error("conditional_variance: need n >= 1 points");
    const PowerSpectrum& spec = config.spectrum;

    double sigma00 = spec.total_variance().value;
    Eigen::MatrixXd gram(n, n);
    Eigen::VectorXd cross(n);
    for (int i = 0; i < n; ++i) {
        cross(i) = covariance(spec, config.x0, config.points[i]).value;
        gram(i, i) = sigma00;
        for (int j = 0; j < i; ++j) {
            double cij = covariance(spec, config.points[i], config.points[j]).value;
            gram(i, j) = cij;
            gram(j, i) = cij;
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    double cutoff = 1e-10 * gram.trace();
    Eigen::VectorXd w = eig.eigenvectors().transpose() * cross;
    double explained = 0.0;
    for (int i = 0; i < n; ++i) {
        double lambda = eig.eigenvalues()(i);
        if (lambda < -cutoff)
            throw ConsistencyError("conditional_variance: covariance matrix has a negative "
                                   "eigenvalue");
        if (lambda > cutoff) explained += w(i) * w(i) / lambda;
    }
    return std::max(0.0, sigma00 - explained);
}

double quadratic_form_min(const ConditioningConfig& config) {
    const int n = int(config.points.size());
    if (n < 1) throw std::domain_error("quadratic_form_min: need n >= 1 points");
    const PowerSpectrum& spec = config.spectrum;
    const int l_max = spec.l_max();

    // Isotropy: move x0 to the pole, where Y_lm is sqrt((2l+1)/4pi) delta_m0.
    Rotation rot = rotation_to_north_pole(config.x0);
    std::vector<SpherePoint> pts;
    pts.reserve(n);
    for (const auto& p : config.points) pts.push_back(apply_rotation(rot, p));

    // Rows: (l, m >= 0) split into real and imaginary parts. The +/-m pair of
    // the design contributes twice the m > 0 row, folded in as weight 2.
    const std::size_t n_lm = std::size_t(l_max) * (l_max + 3) / 2;
    Eigen::MatrixXd design(2 * n_lm, n);
    Eigen::VectorXd target = Eigen::VectorXd::Zero(2 * n_lm);

    std::vector<std::vector<double>> plm(n);
    for (int j = 0; j < n; ++j) {
        plm[j].resize(n_lm);
        normalized_legendre_scan(l_max, pts[j].z(), [&](int m, int l, double v) {
            if (l == 0) return;
            plm[j][HarmonicCoefficients::packed_index(l, m)] = v;
        });
    }

    for (int l = 1; l <= l_max; ++l) {
        for (int m = 0; m <= l; ++m) {
            std::size_t idx = HarmonicCoefficients::packed_index(l, m);
            double cw = std::sqrt(spec.value(l));
            double weight = (m == 0) ? cw : cw * std::sqrt(2.0);
            if (m == 0) target(2 * idx) = weight * std::sqrt((2.0 * l + 1.0) / (4.0 * M_PI));
            for (int j = 0; j < n; ++j) {
                double phi_j = pts[j].longitude();
                double v = plm[j][idx];
                design(2 * idx, j) = weight * v * std::cos(m * phi_j);
                design(2 * idx + 1, j) = weight * v * std::sin(m * phi_j);
            }
        }
    }

    Eigen::VectorXd gamma = design.colPivHouseholderQr().solve(target);
    return (target - design * gamma).squaredNorm();
}

SlndGeometry slnd_geometry_from_string(const std::string& name) {
    if (name == "ring") return SlndGeometry::ring;
    if (name == "random-cap") return SlndGeometry::random_cap;
    if (name == "adversarial") return SlndGeometry::adversarial;
    throw std::invalid_argument("unknown slnd geometry: " + name);
}

std::string to_string(SlndGeometry geometry) {
    switch (geometry) {
        case SlndGeometry::ring: return "ring";
        case SlndGeometry::random_cap: return "random-cap";
        case SlndGeometry::adversarial: return "adversarial";
    }
    return "?";
}

namespace {

std::vector<SpherePoint> make_geometry(SlndGeometry geometry, double eps, int n,
                                       RngStream& rng) {
    std::vector<SpherePoint> pts;
    pts.reserve(n);
    switch (geometry) {
        case SlndGeometry::ring: {
            double phi0 = 2.0 * M_PI * rng.uniform();
            for (int j = 0; j < n; ++j)
                pts.push_back(SpherePoint::from_angles(eps, phi0 + 2.0 * M_PI * j / n));
            break;
        }
        case SlndGeometry::random_cap: {
            pts.push_back(SpherePoint::from_angles(eps, 2.0 * M_PI * rng.uniform()));
            for (int j = 1; j < n; ++j) {
                double theta = std::min(eps * (1.0 + 2.0 * rng.uniform()), M_PI);
                pts.push_back(SpherePoint::from_angles(theta, 2.0 * M_PI * rng.uniform()));
            }
            break;
        }
        case SlndGeometry::adversarial: {
            // Crowd one side: narrow longitude sector, distances in [eps, 2eps].
            double phi0 = 2.0 * M_PI * rng.uniform();
            pts.push_back(SpherePoint::from_angles(eps, phi0));
            for (int j = 1; j < n; ++j) {
                double theta = std::min(eps * (1.0 + rng.uniform()), M_PI);
                pts.push_back(SpherePoint::from_angles(theta, phi0 + 0.3 * rng.uniform()));
            }
            break;
        }
    }
    return pts;
}

}  // namespace

SlndScanResult slnd_scan(double alpha, std::span<const double> epsilon_grid, int n,
                         SlndGeometry geometry, int replicates, std::uint64_t seed, int threads,
                         bool exploratory) {
    if (alpha >= 4.0 && !exploratory)
        throw std::domain_error(
            "slnd_scan: alpha >= 4 is outside the certified range; pass exploratory");
    if (n < 1 || replicates < 1)
        throw std::domain_error("slnd_scan: need n >= 1 and replicates >= 1");
    for (double e : epsilon_grid)
        if (!(e > 0.0 && e < M_PI / 2)) throw std::domain_error("slnd_scan: bad epsilon");

    SlndScanResult result;
    result.exploratory = alpha >= 4.0;
    result.rows.resize(epsilon_grid.size() * std::size_t(replicates));

    for (std::size_t ei = 0; ei < epsilon_grid.size(); ++ei) {
        double eps = epsilon_grid[ei];
        PowerSpectrum spec(alpha, recommended_l_max(eps, 4096));
        parallel_for(replicates, threads, [&, eps, ei](std::int64_t rep) {
            RngStream rng(seed, std::uint64_t(rep), "slnd:eps=" + std::to_string(ei));
            ConditioningConfig config{SpherePoint::north_pole(),
                                      make_geometry(geometry, eps, n, rng), spec};
            double min_dist = M_PI;
            for (const auto& p : config.points)
                min_dist = std::min(min_dist, geodesic_distance(config.x0, p));
            double var = conditional_variance(config);
            double rho = rho_alpha(alpha, min_dist);
            result.rows[ei * replicates + rep] = {
                eps,         std::uint64_t(rep),
                min_dist,    var,
                var / std::pow(eps, alpha - 2.0), var / (rho * rho)};
        });
    }

    std::vector<double> log_eps, log_min_ratio;
    double global_min_nd = -1.0, scale_min = 1e300, scale_max = 0.0;
    for (std::size_t ei = 0; ei < epsilon_grid.size(); ++ei) {
        double min_c2 = -1.0, min_nd = -1.0;
        for (int rep = 0; rep < replicates; ++rep) {
            const SlndRow& row = result.rows[ei * replicates + rep];
            if (min_c2 < 0.0 || row.ratio_c2 < min_c2) min_c2 = row.ratio_c2;
            if (min_nd < 0.0 || row.ratio_nd < min_nd) min_nd = row.ratio_nd;
        }
        result.epsilon.push_back(epsilon_grid[ei]);
        result.min_ratio_c2.push_back(min_c2);
        result.min_ratio_nd.push_back(min_nd);
        if (min_c2 > 0.0) {
            log_eps.push_back(std::log(epsilon_grid[ei]));
            log_min_ratio.push_back(std::log(min_c2));
        }
        if (global_min_nd < 0.0 || min_nd < global_min_nd) global_min_nd = min_nd;
        scale_min = std::min(scale_min, epsilon_grid[ei]);
        scale_max = std::max(scale_max, epsilon_grid[ei]);
    }
    if (log_eps.size() >= 2)
        result.slope_log_min_ratio = detail::fit_line(log_eps, log_min_ratio).slope;

    std::ostringstream digest;
    digest << "alpha=" << alpha << ";n=" << n << ";geometry=" << to_string(geometry)
           << ";replicates=" << replicates << ";seed=" << seed;
    result.c2_estimate = {"c2_empirical", global_min_nd, digest.str(), scale_min, scale_max};
    return result;
}

}  // namespace sgfield
