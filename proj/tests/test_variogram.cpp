#include <cmath>
#include <vector>

#include "doctest.h"
#include "sgfield/field.hpp"
#include "sgfield/special_functions.hpp"
#include "sgfield/variogram.hpp"

using namespace sgfield;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    return g;
}

}  // namespace

TEST_SUITE_BEGIN("variogram");

TEST_CASE("geodesic distance basics") {
    auto np = SpherePoint::north_pole();
    CHECK(geodesic_distance(np, np) == 0.0);
    auto south = SpherePoint::from_unit_vector(0, 0, -1);
    CHECK(geodesic_distance(np, south) == doctest::Approx(M_PI));
    auto equator = SpherePoint::from_angles(M_PI / 2, 1.0);
    CHECK(geodesic_distance(np, equator) == doctest::Approx(M_PI / 2).epsilon(1e-14));
}

TEST_CASE("variogram endpoints and the covariance identity") {
    PowerSpectrum spec(3.0, 800);
    CHECK(variogram(spec, 0.0).value == 0.0);

    double c0_val = covariance_at_angle(spec, 0.0).value;
    RngStream rng(17, 0, "thetas");
    for (int i = 0; i < 50; ++i) {
        double theta = M_PI * rng.uniform();
        double lhs = variogram(spec, theta).value;
        double rhs = 2.0 * (c0_val - covariance_at_angle(spec, theta).value);
        CHECK(std::fabs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("condition-A sandwich against Q_alpha") {
    // G == 1 makes the bound an identity
    PowerSpectrum unit(3.0, 5000);
    double v = variogram(unit, 0.01).value;
    double q = q_alpha(3.0, 0.01, 5000).value;
    CHECK(v == doctest::Approx(q / M_PI).epsilon(1e-13));

    // bounded envelope: (1/(c0 pi)) Q <= d_T^2 <= (c0/pi) Q
    auto osc = PowerSpectrum::log_oscillation_envelope(3.0, 5000);
    double vo = variogram(osc, 0.01).value;
    CHECK(vo >= q / (osc.c0() * M_PI) - 1e-15);
    CHECK(vo <= osc.c0() * q / M_PI + 1e-15);
}

TEST_CASE("q_alpha basics") {
    CHECK(q_alpha(3.0, 0.0, 100).value == 0.0);
    // bounded band of Q_3(theta)/theta on small scales
    double lo = 1e300, hi = 0.0;
    for (double theta : log_grid(1e-4, 0.05, 24)) {
        double q = q_alpha(3.0, theta, recommended_l_max(theta)).value;
        lo = std::min(lo, q / theta);
        hi = std::max(hi, q / theta);
    }
    CHECK(hi / lo < 2.0);
    CHECK(lo > 0.0);
}

TEST_CASE("variogram monotone near zero") {
    for (double alpha : {2.5, 3.0, 3.5, 4.0, 5.0}) {
        PowerSpectrum spec(alpha, recommended_l_max(1e-3));
        double prev = 0.0;
        for (double theta : log_grid(1e-3, 0.1, 20)) {
            double v = variogram(spec, theta).value;
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("phase transition of the canonical metric") {
    // slope of log d_T^2 vs log theta: alpha-2 in the fractal range, 2 beyond
    struct Case {
        double alpha;
        double slope;
    };
    for (auto [alpha, slope] : {Case{2.5, 0.5}, Case{3.0, 1.0}, Case{5.0, 2.0}}) {
        PowerSpectrum spec(alpha, recommended_l_max(1e-4));
        std::vector<double> lx, ly;
        for (double theta : log_grid(1e-4, 1e-2, 12)) {
            lx.push_back(std::log(theta));
            ly.push_back(std::log(variogram(spec, theta).value));
        }
        auto fit = detail::fit_line(lx, ly);
        CHECK(std::fabs(fit.slope - slope) < 0.05);
    }
}

TEST_CASE("sandwich report flags and estimates") {
    auto grid = log_grid(1e-4, 0.05, 32);

    PowerSpectrum spec3(3.0, recommended_l_max(1e-4));
    auto prof = sandwich_report(spec3, grid);
    CHECK(prof.c1_estimate >= 1.0);
    CHECK(!prof.ratio_unbounded_flag);
    double lo = 1e300, hi = 0.0;
    for (double r : prof.ratio) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    CHECK(hi / lo <= 10.0);

    // alpha = 5: d_T^2 / theta^2 bounded; alpha = 4 includes the log factor
    PowerSpectrum spec5(5.0, recommended_l_max(1e-4));
    auto prof5 = sandwich_report(spec5, grid);
    CHECK(!prof5.ratio_unbounded_flag);
    PowerSpectrum spec4(4.0, recommended_l_max(1e-4));
    auto prof4 = sandwich_report(spec4, grid);
    double lo4 = 1e300, hi4 = 0.0;
    for (double r : prof4.ratio) {
        lo4 = std::min(lo4, r);
        hi4 = std::max(hi4, r);
    }
    CHECK(hi4 / lo4 <= 10.0);

    // a wrong normalization is flagged: treat an alpha=3 variogram as alpha=2.5
    std::vector<double> ratio_bad;
    for (double theta : grid)
        ratio_bad.push_back(variogram(spec3, theta).value /
                            std::pow(rho_alpha(2.5, theta), 2.0));
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        lx.push_back(std::log(grid[i]));
        ly.push_back(std::log(ratio_bad[i]));
    }
    CHECK(std::fabs(detail::fit_line(lx, ly).slope) > 0.1);
}

TEST_CASE("variogram depends on the pair only through the distance") {
    PowerSpectrum spec(3.0, 600);
    RngStream rng(23, 0, "pairs");
    for (int i = 0; i < 100; ++i) {
        auto x = random_point(rng);
        auto y = random_point(rng);
        double theta = geodesic_distance(x, y);
        double via_cov =
            2.0 * (covariance(spec, x, x).value - covariance(spec, x, y).value);
        CHECK(std::fabs(variogram(spec, theta).value - via_cov) < 1e-10);
    }
}

TEST_SUITE_END();
