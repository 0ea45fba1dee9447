#include "sgfield/variogram.hpp"

#include <cmath>
#include <stdexcept>

#include "sgfield/special_functions.hpp"

namespace sgfield {

ValueWithTail variogram(const PowerSpectrum& spec, double theta) {
    if (theta < 0.0 || theta > M_PI)
        throw std::domain_error("variogram: requires theta in [0, pi]");
    const double t = std::cos(theta);
    KahanSum sum;
    double pm2 = 1.0, pm1 = t;
    sum.add(spec.value(1) * (3.0 / (2.0 * M_PI)) * (1.0 - t));
    for (int l = 2; l <= spec.l_max(); ++l) {
        double p = ((2.0 * l - 1.0) * t * pm1 - (l - 1.0) * pm2) / l;
        pm2 = pm1;
        pm1 = p;
        sum.add(spec.value(l) * (2.0 * l + 1.0) / (2.0 * M_PI) * (1.0 - p));
    }
    double L = double(spec.l_max());
    double tail = spec.c0() / M_PI *
                  (2.0 * std::pow(L, 2.0 - spec.alpha()) / (spec.alpha() - 2.0) +
                   std::pow(L, 1.0 - spec.alpha()) / (spec.alpha() - 1.0));
    return {sum.value(), tail};
}

ValueWithTail q_alpha(double alpha, double theta, int l_max) {
    if (alpha <= 2.0) throw std::domain_error("q_alpha: requires alpha > 2");
    if (theta < 0.0 || theta > M_PI)
        throw std::domain_error("q_alpha: requires theta in [0, pi]");
    if (l_max < 1) throw std::domain_error("q_alpha: requires l_max >= 1");
    const double t = std::cos(theta);
    KahanSum sum;
    double pm2 = 1.0, pm1 = t;
    sum.add(1.5 * (1.0 - t));
    for (int l = 2; l <= l_max; ++l) {
        double p = ((2.0 * l - 1.0) * t * pm1 - (l - 1.0) * pm2) / l;
        pm2 = pm1;
        pm1 = p;
        sum.add(std::pow(double(l), -alpha) * (l + 0.5) * (1.0 - p));
    }
    double L = double(l_max);
    double tail = 2.0 * (std::pow(L, 2.0 - alpha) / (alpha - 2.0) +
                         0.5 * std::pow(L, 1.0 - alpha) / (alpha - 1.0));
    return {sum.value(), tail};
}

VariogramProfile sandwich_report(const PowerSpectrum& spec, std::span<const double> theta_grid) {
    if (theta_grid.size() < 2)
        throw std::invalid_argument("sandwich_report: need at least 2 grid points");
    VariogramProfile prof;
    prof.alpha = spec.alpha();
    std::vector<double> log_theta, log_ratio;
    double ratio_max = -1.0, ratio_min = -1.0;
    for (double theta : theta_grid) {
        if (!(theta > 0.0)) throw std::domain_error("sandwich_report: requires theta > 0");
        ValueWithTail v = variogram(spec, theta);
        double rho = rho_alpha(spec.alpha(), theta);
        double ratio = v.value / (rho * rho);
        prof.theta.push_back(theta);
        prof.value.push_back(v.value);
        prof.rho_sq.push_back(rho * rho);
        prof.ratio.push_back(ratio);
        prof.tail_bound.push_back(v.tail_bound);
        if (ratio_max < 0.0 || ratio > ratio_max) ratio_max = ratio;
        if (ratio_min < 0.0 || ratio < ratio_min) ratio_min = ratio;
        log_theta.push_back(std::log(theta));
        log_ratio.push_back(std::log(ratio));
    }
    prof.c1_estimate = std::max(ratio_max, 1.0 / ratio_min);
    auto fit = detail::fit_line(log_theta, log_ratio);
    prof.ratio_slope = fit.slope;
    prof.ratio_unbounded_flag = std::fabs(fit.slope) > 0.1;
    return prof;
}

}  // namespace sgfield
