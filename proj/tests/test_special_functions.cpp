#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "sgfield/special_functions.hpp"

using namespace sgfield;

namespace {

// Plain quadrature oracle for integrals with the inverse-square-root endpoint
// weight: int_0^theta f(psi) / sqrt(cos psi - cos theta) dpsi via psi = theta - u^2,
// using cos A - cos B = 2 sin((A+B)/2) sin((B-A)/2) to avoid cancellation.
// Panels are graded dyadically into u = sqrt(theta), where f(psi -> 0) may
// carry an algebraic factor.
template <typename F>
double endpoint_weighted_integral(const F& f, double theta) {
    auto g = [&](double u) {
        double half = 0.5 * u * u;
        double s = half > 1e-150 ? std::sin(half) / half : 1.0;
        double weight = std::sin(theta - half) * s;  // (cos(theta-u^2)-cos theta)/u^2
        return 2.0 * f(theta - u * u) / std::sqrt(weight);
    };
    static const double xn[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                 0.9602898564975363};
    static const double wn[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                 0.1012285362903763};
    auto gl8_panels = [&](double a, double b, int panels) {
        double h = (b - a) / panels, acc = 0.0;
        for (int p = 0; p < panels; ++p) {
            double mid = a + (p + 0.5) * h, half = 0.5 * h;
            for (int i = 0; i < 4; ++i)
                acc += wn[i] * (g(mid - half * xn[i]) + g(mid + half * xn[i])) * half;
        }
        return acc;
    };
    const double b = std::sqrt(theta);
    double acc = 0.0;
    double lo = 0.0;
    for (int level = 0; level < 48; ++level) {
        double hi = b * (1.0 - std::ldexp(1.0, -(level + 1)));
        acc += gl8_panels(lo, hi, 8);
        lo = hi;
    }
    return acc;  // leftover sliver of width b*2^-48 is below rounding
}

std::complex<double> brute_polylog(double s, double psi, long terms) {
    std::complex<double> acc;
    for (long k = 1; k <= terms; ++k) acc += std::pow(double(k), -s) * std::polar(1.0, k * psi);
    return acc;
}

}  // namespace

TEST_SUITE_BEGIN("special_functions");

TEST_CASE("legendre_p closed forms and bound") {
    for (int ell : {0, 1, 5, 40, 399}) CHECK(legendre_p(ell, 1.0) == doctest::Approx(1.0));
    CHECK(legendre_p(1, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(legendre_p(2, 0.5) == doctest::Approx(-0.125).epsilon(1e-15));
    CHECK_THROWS_AS(legendre_p(3, 1.0001), std::domain_error);

    // |P_l| <= 1 on [-1, 1]
    auto p = legendre_batch(2000, 0.0);
    for (double t : {-1.0, -0.73, -0.2, 0.11, 0.5, 0.987, 1.0}) {
        legendre_batch(2000, t, p);
        for (double v : p) CHECK(std::fabs(v) <= 1.0 + 1e-12);
    }
}

TEST_CASE("legendre_batch matches single evaluations") {
    CHECK(legendre_batch(2, 1.0) == std::vector<double>{1.0, 1.0, 1.0});
    auto b = legendre_batch(2, 0.5);
    CHECK(b[1] == doctest::Approx(0.5));
    CHECK(b[2] == doctest::Approx(-0.125));
    for (double t = -0.99; t <= 0.99; t += 0.18) {
        auto batch = legendre_batch(500, t);
        for (int ell : {0, 1, 17, 123, 500})
            CHECK(batch[ell] == doctest::Approx(legendre_p(ell, t)).epsilon(1e-12));
    }
}

TEST_CASE("spherical harmonics at the pole and addition theorem") {
    auto pole = SpherePoint::north_pole();
    CHECK(spherical_harmonic(3, 0, pole).real() ==
          doctest::Approx(std::sqrt(7.0 / (4.0 * M_PI))).epsilon(1e-14));
    CHECK(std::abs(spherical_harmonic(3, 2, pole)) == doctest::Approx(0.0));
    CHECK_THROWS_AS(spherical_harmonic(3, 4, pole), std::domain_error);

    RngStream rng(42, 0, "addition");
    for (int trial = 0; trial < 20; ++trial) {
        auto x = random_point(rng);
        auto y = random_point(rng);
        std::complex<double> lhs;
        for (int m = -5; m <= 5; ++m)
            lhs += std::conj(spherical_harmonic(5, m, x)) * spherical_harmonic(5, m, y);
        double rhs = 11.0 / (4.0 * M_PI) * legendre_p(5, x.dot(y));
        CHECK(std::fabs(lhs.real() - rhs) < 1e-10);
        CHECK(std::fabs(lhs.imag()) < 1e-10);
    }
}

TEST_CASE("mehler-dirichlet equals the recurrence") {
    CHECK(mehler_dirichlet_p(10, 0.5) ==
          doctest::Approx(legendre_p(10, std::cos(0.5))).epsilon(1e-8));
    CHECK(mehler_dirichlet_p(1, 1.0) == doctest::Approx(std::cos(1.0)).epsilon(1e-8));
    CHECK(mehler_dirichlet_p(3, 1e-6) == doctest::Approx(1.0).epsilon(1e-7));
    for (int ell : {2, 17, 80, 200}) {
        for (double theta : {0.01, 0.4, 1.7, 2.8, 3.1}) {
            CHECK(mehler_dirichlet_p(ell, theta) ==
                  doctest::Approx(legendre_p(ell, std::cos(theta))).epsilon(1e-8));
        }
    }
    CHECK_THROWS_AS(mehler_dirichlet_p(3, 0.0), std::domain_error);
}

TEST_CASE("mehler-dirichlet via the raw endpoint-weighted oracle") {
    // sqrt(2)/pi int_0^theta cos((l+1/2)psi) (cos psi - cos theta)^(-1/2) dpsi
    for (int ell : {1, 6, 25}) {
        for (double theta : {0.3, 1.2}) {
            double oracle = std::sqrt(2.0) / M_PI *
                            endpoint_weighted_integral(
                                [&](double psi) { return std::cos((ell + 0.5) * psi); }, theta);
            CHECK(oracle == doctest::Approx(legendre_p(ell, std::cos(theta))).epsilon(1e-9));
            CHECK(mehler_dirichlet_p(ell, theta) == doctest::Approx(oracle).epsilon(1e-9));
        }
    }
}

TEST_CASE("change-of-variable integral identity") {
    // int_0^theta sin^{g-1}(psi/2) cos(psi/2) (cos psi - cos theta)^(-1/2) dpsi
    //   = (sqrt(2)/2) B(g/2, 1/2) sin^{g-1}(theta/2)
    for (double gamma : {1.5, 2.0, 3.0}) {
        for (double theta : {0.1, 0.5}) {
            double lhs = endpoint_weighted_integral(
                [&](double psi) {
                    return std::pow(std::sin(0.5 * psi), gamma - 1.0) * std::cos(0.5 * psi);
                },
                theta);
            double rhs = 0.5 * std::sqrt(2.0) * beta_function(0.5 * gamma, 0.5) *
                         std::pow(std::sin(0.5 * theta), gamma - 1.0);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
        }
    }
}

TEST_CASE("endpoint integral without the cosine factor expands in sin^2(theta/2)") {
    // int_0^theta sin^{g-1}(psi/2) (cos psi - cos theta)^(-1/2) dpsi
    //   = (sqrt(2)/2) sin^{g-1}(theta/2) [B(g/2,1/2) + (1/2)B(g/2+1,1/2) sin^2(theta/2) + ...]
    // The 1/2 follows from expanding (1 - x^2 sin^2(theta/2))^(-1/2) under
    // x = sin(psi/2)/sin(theta/2) and matches high-precision quadrature.
    for (double gamma : {1.5, 3.0}) {
        double b0 = beta_function(0.5 * gamma, 0.5);
        double b1 = 0.5 * beta_function(0.5 * gamma + 1.0, 0.5);
        double prev_gap = 1e300;
        for (double theta : {0.2, 0.1, 0.05}) {
            double lhs = endpoint_weighted_integral(
                [&](double psi) { return std::pow(std::sin(0.5 * psi), gamma - 1.0); }, theta);
            double u = std::sin(0.5 * theta);
            double correction =
                (lhs / (0.5 * std::sqrt(2.0) * std::pow(u, gamma - 1.0)) - b0) / (u * u);
            double gap = std::fabs(correction - b1);
            CHECK(gap < 0.02 * b1);
            CHECK(gap < prev_gap);  // O(sin^4) remainder shrinks with theta
            prev_gap = gap;
        }
    }
}

TEST_CASE("riemann zeta classical values and brute-force oracle") {
    CHECK(riemann_zeta(2.0) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-13));
    CHECK(riemann_zeta(4.0) == doctest::Approx(std::pow(M_PI, 4) / 90.0).epsilon(1e-13));
    CHECK_THROWS_AS(riemann_zeta(1.0), std::domain_error);

    // direct sum to 1e7 with integral tail correction
    const double s = 2.5;
    KahanSum sum;
    const long n = 10'000'000;
    for (long k = 1; k <= n; ++k) sum.add(std::pow(double(k), -s));
    double brute = sum.value() + std::pow(double(n), 1.0 - s) / (s - 1.0);
    CHECK(riemann_zeta(s) == doctest::Approx(brute).epsilon(1e-10));
}

TEST_CASE("zeta continuation spot values") {
    CHECK(detail::zeta_real(0.0) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(detail::zeta_real(-1.0) == doctest::Approx(-1.0 / 12.0).epsilon(1e-10));
    CHECK(detail::zeta_real(-2.0) == doctest::Approx(0.0));
    CHECK(detail::zeta_real(0.5) == doctest::Approx(-1.4603545088095868).epsilon(1e-12));
}

TEST_CASE("harmonic numbers") {
    CHECK(harmonic_number(0) == 0.0);
    CHECK(harmonic_number(1) == 1.0);
    CHECK(harmonic_number(3) == doctest::Approx(11.0 / 6.0).epsilon(1e-15));
    CHECK_THROWS_AS(harmonic_number(-1), std::domain_error);
}

TEST_CASE("polylog on the unit circle") {
    // alternating zeta identity at psi = pi
    auto li_m1 = polylog(2.0, M_PI);
    CHECK(li_m1.real() == doctest::Approx(-M_PI * M_PI / 12.0).epsilon(1e-11));
    CHECK(std::fabs(li_m1.imag()) < 1e-11);

    // z -> 1 limit approaches zeta(2)
    auto near_one = polylog(2.0, 1e-6);
    CHECK(near_one.real() == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-5));

    // both branches agree near the crossover
    for (double psi : {0.45, 0.55}) {
        for (double s : {1.5, 2.0, 3.3}) {
            auto direct = brute_polylog(s, psi, 2'000'000);
            auto fast = polylog(s, psi);
            CHECK(std::abs(fast - direct) < 2e-6);
        }
    }
    CHECK_THROWS_AS(polylog(0.8, 1.0), std::domain_error);
    CHECK_THROWS_AS(polylog(2.0, 0.0), std::domain_error);
}

TEST_CASE("cosine-series resummation identity") {
    // sum_l l^-s cos((l+1/2)psi) = Re[e^{i psi/2} Li_s(e^{i psi})]
    for (double s : {1.5, 2.0, 2.5, 3.0}) {
        for (double psi : {0.1, 0.3, 0.5, 1.0}) {
            KahanSum cosine;
            for (long l = 1; l <= 1'000'000; ++l)
                cosine.add(std::pow(double(l), -s) * std::cos((l + 0.5) * psi));
            double rhs = (std::polar(1.0, 0.5 * psi) * polylog(s, psi)).real();
            CHECK(cosine.value() == doctest::Approx(rhs).epsilon(1e-6));
        }
    }
}

TEST_CASE("polylog expansion against direct summation") {
    auto ref1 = brute_polylog(2.5, 0.1, 3'000'000);
    CHECK(std::abs(polylog_expansion(2.5, 0.1) - ref1) < 1e-8);
    auto ref2 = brute_polylog(3.0, 0.05, 3'000'000);
    CHECK(std::abs(polylog_expansion(3.0, 0.05) - ref2) < 1e-8);
    CHECK_THROWS_AS(polylog_expansion(2.5, 1.5), std::domain_error);
}

TEST_CASE("expansion error decreases with truncation order") {
    // Partial sums of Gamma(1-s)(-x)^(s-1) + sum_k zeta(s-k) x^k / k! at psi = 0.2.
    const double s = 2.5, psi = 0.2;
    const std::complex<double> x(0.0, psi);
    auto ref = brute_polylog(s, psi, 3'000'000);
    std::complex<double> acc = std::tgamma(1.0 - s) * std::pow(-x, s - 1.0);
    std::complex<double> xp(1.0, 0.0);
    double fact = 1.0;
    double prev_err = 1e300;
    for (int k = 0; k <= 12; ++k) {
        if (k > 0) {
            xp *= x;
            fact *= k;
        }
        acc += detail::zeta_real(s - k) * xp / fact;
        if (k >= 2 && k % 2 == 0) {
            double err = std::abs(acc - ref);
            // strictly decreasing until it hits the rounding floor
            CHECK((err < prev_err || err < 1e-12));
            prev_err = err;
        }
    }
    CHECK(prev_err < 1e-9);
}

TEST_CASE("incomplete beta") {
    CHECK(incomplete_beta(1.0, 2.5, 1.5) == doctest::Approx(beta_function(2.5, 1.5)));
    CHECK(incomplete_beta(1.0, 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(incomplete_beta(0.5, 1.0, 1.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(incomplete_beta(1.5, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(incomplete_beta(0.5, -1.0, 1.0), std::domain_error);

    // quadrature oracle for an interior case
    double y = 0.37, a = 1.7, b = 0.6;
    double acc = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        double x = y * (i + 0.5) / n;
        acc += std::pow(x, a - 1.0) * std::pow(1.0 - x, b - 1.0);
    }
    acc *= y / n;
    CHECK(incomplete_beta(y, a, b) == doctest::Approx(acc).epsilon(1e-6));
}

TEST_CASE("log-weighted beta integral") {
    CHECK(b_ln(1.0, 1.0) == doctest::Approx(-1.0).epsilon(1e-12));
    for (double a : {0.7, 1.5, 3.0})
        for (double b : {0.5, 1.0, 2.5}) CHECK(b_ln(a, b) < 0.0);

    // identity b_ln(a,b) = -int_0^1 B(y;a,b)/y dy by nested quadrature, split
    // and substituted so both endpoints are regular: y = v^2 below 1/2 and
    // y = 1 - w^2 above it.
    const double a = 1.5, b = 0.5;
    const int n = 4000;
    const double split = std::sqrt(0.5);
    double outer = 0.0;
    for (int i = 0; i < n; ++i) {
        double v = split * (i + 0.5) / n;
        outer += 2.0 * incomplete_beta(v * v, a, b) / v * (split / n);
    }
    for (int i = 0; i < n; ++i) {
        double w = split * (i + 0.5) / n;
        double y = 1.0 - w * w;
        outer += 2.0 * w * incomplete_beta(y, a, b) / y * (split / n);
    }
    CHECK(b_ln(a, b) == doctest::Approx(-outer).epsilon(1e-7));
}

TEST_CASE("digamma spot values") {
    CHECK(digamma(1.0) == doctest::Approx(-0.57721566490153286).epsilon(1e-13));
    CHECK(digamma(2.0) == doctest::Approx(1.0 - 0.57721566490153286).epsilon(1e-13));
    CHECK_THROWS_AS(digamma(0.0), std::domain_error);
}

TEST_CASE("legendre series sum basics") {
    AccuracyPolicy loose;
    loose.abs_tol = 1e-5;  // the crude |P_l| <= 1 tail bound drives L ~ tol^(-1/(s-1))
    auto at_pi = legendre_series_sum(2.0, M_PI, loose);
    CHECK(std::fabs(at_pi.value) <= riemann_zeta(2.0));

    loose.abs_tol = 1e-8;
    auto near_zero = legendre_series_sum(3.0, 1e-3, loose);
    CHECK(near_zero.value == doctest::Approx(riemann_zeta(3.0)).epsilon(1e-4));

    // self-consistency: tightening the budget moves the value by less than the bound
    AccuracyPolicy tight = loose;
    auto v1 = legendre_series_sum(2.5, 0.01, tight);
    tight.abs_tol = 1e-10;
    auto v2 = legendre_series_sum(2.5, 0.01, tight);
    CHECK(std::fabs(v1.value - v2.value) <= v1.tail_bound);

    AccuracyPolicy starved;
    starved.abs_tol = 1e-9;
    starved.max_terms = 10000;
    CHECK_THROWS_AS(legendre_series_sum(1.2, 0.01, starved), BudgetError);
}

TEST_CASE("sum_poly asymptotic orders") {
    std::vector<double> grid;
    for (int i = 0; i < 16; ++i) grid.push_back(1e-4 * std::pow(100.0, i / 15.0));

    auto r2 = sum_poly_asymptotic_check(2.0, grid);
    CHECK(r2.ratio_s2 == doctest::Approx(2.0).epsilon(0.01));
    CHECK(r2.case_name == "1<s<3");

    auto r25 = sum_poly_asymptotic_check(2.5, grid);
    CHECK(std::fabs(r25.fitted_slope - 1.5) < 0.05);
    CHECK(r25.predicted_order == doctest::Approx(1.5));

    auto r5 = sum_poly_asymptotic_check(5.0, grid);
    CHECK(std::fabs(r5.fitted_slope - 2.0) < 0.05);

    auto r3 = sum_poly_asymptotic_check(3.0, grid);
    CHECK(r3.case_name == "s=3");
    CHECK(r3.fit_residual < 0.01);

    CHECK_THROWS(sum_poly_asymptotic_check(2.0, std::vector<double>{0.01, 0.02, 0.03}));
}

TEST_CASE("special functions are deterministic") {
    CHECK(mehler_dirichlet_p(37, 1.234) == mehler_dirichlet_p(37, 1.234));
    CHECK(polylog(2.2, 0.7) == polylog(2.2, 0.7));
    AccuracyPolicy loose;
    loose.abs_tol = 1e-8;
    CHECK(legendre_series_sum(2.5, 0.02, loose).value ==
          legendre_series_sum(2.5, 0.02, loose).value);
}

TEST_SUITE_END();
