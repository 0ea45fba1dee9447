#include <cmath>
#include <vector>

#include "doctest.h"
#include "sgfield/slnd.hpp"

using namespace sgfield;

TEST_SUITE_BEGIN("slnd");

TEST_CASE("scalar Schur complement") {
    PowerSpectrum spec(3.0, 128);
    auto x0 = SpherePoint::north_pole();
    auto x1 = SpherePoint::from_angles(0.4, 1.0);
    ConditioningConfig config{x0, {x1}, spec};

    double s00 = spec.total_variance().value;
    double s01 = covariance(spec, x0, x1).value;
    double expected = s00 - s01 * s01 / s00;
    CHECK(conditional_variance(config) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(quadratic_form_min(config) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("perfect prediction when x0 is observed") {
    PowerSpectrum spec(3.0, 128);
    auto x0 = SpherePoint::from_angles(1.1, 0.3);
    ConditioningConfig config{x0, {SpherePoint::from_angles(0.8, 2.0), x0}, spec};
    double s00 = spec.total_variance().value;
    CHECK(conditional_variance(config) <= 1e-9 * s00);
}

TEST_CASE("duplicated conditioning points are harmless") {
    PowerSpectrum spec(3.0, 128);
    auto x1 = SpherePoint::from_angles(0.5, 0.0);
    ConditioningConfig once{SpherePoint::north_pole(), {x1}, spec};
    ConditioningConfig twice{SpherePoint::north_pole(), {x1, x1, x1}, spec};
    CHECK(conditional_variance(twice) ==
          doctest::Approx(conditional_variance(once)).epsilon(1e-10));
}

TEST_CASE("oracle equivalence on random configurations") {
    PowerSpectrum spec(3.0, 64);
    RngStream rng(2024, 0, "configs");
    for (int trial = 0; trial < 20; ++trial) {
        int n = 1 + int(rng.uniform() * 8.0);
        ConditioningConfig config{random_point(rng), {}, spec};
        for (int j = 0; j < n; ++j) config.points.push_back(random_point(rng));
        double cv = conditional_variance(config);
        double qf = quadratic_form_min(config);
        CHECK(qf == doctest::Approx(cv).epsilon(1e-6));
    }
}

TEST_CASE("conditioning never hurts") {
    PowerSpectrum spec(3.0, 96);
    RngStream rng(7, 0, "nested");
    for (int trial = 0; trial < 30; ++trial) {
        ConditioningConfig config{random_point(rng), {random_point(rng)}, spec};
        double prev = conditional_variance(config);
        CHECK(prev <= spec.total_variance().value + 1e-12);
        for (int add = 0; add < 4; ++add) {
            config.points.push_back(random_point(rng));
            double next = conditional_variance(config);
            CHECK(next <= prev + 1e-9);
            prev = next;
        }
    }
}

TEST_CASE("quadratic form is rotation invariant") {
    PowerSpectrum spec(3.0, 48);
    RngStream rng(15, 0, "rot");
    ConditioningConfig base{random_point(rng), {}, spec};
    for (int j = 0; j < 4; ++j) base.points.push_back(random_point(rng));
    double ref = quadratic_form_min(base);
    for (int trial = 0; trial < 10; ++trial) {
        auto rot = random_rotation(rng);
        ConditioningConfig turned{apply_rotation(rot, base.x0), {}, spec};
        for (const auto& p : base.points) turned.points.push_back(apply_rotation(rot, p));
        CHECK(quadratic_form_min(turned) == doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("an antipodal cluster is barely more informative than one point") {
    PowerSpectrum spec(3.0, 256);
    ConditioningConfig config{SpherePoint::north_pole(), {}, spec};
    RngStream rng(3, 0, "antipodal");
    for (int j = 0; j < 5; ++j)
        config.points.push_back(
            SpherePoint::from_angles(M_PI - 0.05 * rng.uniform(), 2.0 * M_PI * rng.uniform()));
    double s00 = spec.total_variance().value;
    double var = conditional_variance(config);
    // most of the variance survives (only the low multipoles reach across)
    CHECK(var >= 0.5 * s00);
    CHECK(var <= s00);
    // the cluster is nearly redundant with a single antipodal observation
    double c_pi = covariance_at_angle(spec, M_PI).value;
    double single = s00 - c_pi * c_pi / s00;
    CHECK(var <= single + 1e-12);
    CHECK(var >= single - 0.02 * s00);
}

TEST_CASE("scan ratios stay positive with near-zero slope") {
    std::vector<double> eps = {0.1, 0.05, 0.025};
    auto res = slnd_scan(3.0, eps, 4, SlndGeometry::ring, 20, 11);
    for (const auto& row : res.rows) {
        CHECK(row.ratio_c2 > 0.0);
        CHECK(row.ratio_nd > 0.0);
        CHECK(row.min_dist == doctest::Approx(row.epsilon).epsilon(1e-9));
    }
    CHECK(std::fabs(res.slope_log_min_ratio) < 0.3);
    CHECK(res.c2_estimate.value > 0.0);
    CHECK(res.c2_estimate.name == "c2_empirical");
    CHECK(!res.c2_estimate.config_digest.empty());
    CHECK(!res.exploratory);
}

TEST_CASE("adversarial crowding keeps the lower bound positive") {
    std::vector<double> eps = {0.1, 0.05};
    auto res = slnd_scan(3.0, eps, 6, SlndGeometry::adversarial, 50, 5);
    for (double r : res.min_ratio_nd) CHECK(r > 0.0);
    auto cap = slnd_scan(3.0, eps, 6, SlndGeometry::random_cap, 50, 5);
    for (const auto& row : cap.rows) CHECK(row.min_dist == doctest::Approx(row.epsilon));
}

TEST_CASE("alpha >= 4 is exploratory only") {
    std::vector<double> eps = {0.1};
    CHECK_THROWS_AS(slnd_scan(4.0, eps, 2, SlndGeometry::ring, 3, 1), std::domain_error);
    auto res = slnd_scan(4.0, eps, 2, SlndGeometry::ring, 3, 1, 1, true);
    CHECK(res.exploratory);
    for (const auto& row : res.rows) CHECK(row.var > 0.0);
}

TEST_CASE("scan is deterministic and thread independent") {
    std::vector<double> eps = {0.1, 0.05};
    auto a = slnd_scan(3.0, eps, 4, SlndGeometry::random_cap, 10, 99, 1);
    auto b = slnd_scan(3.0, eps, 4, SlndGeometry::random_cap, 10, 99, 3);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].var == b.rows[i].var);
        CHECK(a.rows[i].min_dist == b.rows[i].min_dist);
    }
}

TEST_SUITE_END();
