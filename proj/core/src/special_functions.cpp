#include "sgfield/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgfield/spectra.hpp"

namespace sgfield {

namespace {

// Bernoulli numbers B_2, B_4, ..., B_28.
constexpr double kBernoulli[] = {
    1.0 / 6,           -1.0 / 30,         1.0 / 42,           -1.0 / 30,
    5.0 / 66,          -691.0 / 2730,     7.0 / 6,            -3617.0 / 510,
    43867.0 / 798,     -174611.0 / 330,   854513.0 / 138,     -236364091.0 / 2730,
    8553103.0 / 6,     -23749461029.0 / 870};

}  // namespace

double legendre_p(int ell, double t) {
    if (ell < 0) throw std::domain_error("legendre_p: requires l >= 0");
    if (std::fabs(t) > 1.0) throw std::domain_error("legendre_p: requires |t| <= 1");
    if (ell == 0) return 1.0;
    double pm2 = 1.0, pm1 = t;
    for (int l = 2; l <= ell; ++l) {
        double p = ((2.0 * l - 1.0) * t * pm1 - (l - 1.0) * pm2) / l;
        pm2 = pm1;
        pm1 = p;
    }
    return pm1;
}

void legendre_batch(int l_max, double t, std::span<double> out) {
    if (l_max < 0) throw std::domain_error("legendre_batch: requires l_max >= 0");
    if (std::fabs(t) > 1.0) throw std::domain_error("legendre_batch: requires |t| <= 1");
    if (out.size() < std::size_t(l_max) + 1)
        throw std::invalid_argument("legendre_batch: output span too small");
    out[0] = 1.0;
    if (l_max == 0) return;
    out[1] = t;
    for (int l = 2; l <= l_max; ++l)
        out[l] = ((2.0 * l - 1.0) * t * out[l - 1] - (l - 1.0) * out[l - 2]) / l;
}

std::vector<double> legendre_batch(int l_max, double t) {
    std::vector<double> out(std::size_t(l_max) + 1);
    legendre_batch(l_max, t, out);
    return out;
}

std::complex<double> spherical_harmonic(int ell, int m, const SpherePoint& point) {
    if (ell < 0) throw std::domain_error("spherical_harmonic: requires l >= 0");
    if (std::abs(m) > ell) throw std::domain_error("spherical_harmonic: requires |m| <= l");
    const int am = std::abs(m);
    const double x = point.z();
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));

    double pmm = 1.0 / std::sqrt(4.0 * M_PI);
    for (int mm = 1; mm <= am; ++mm) pmm *= -std::sqrt((2.0 * mm + 1.0) / (2.0 * mm)) * s;
    double val = pmm;
    if (ell > am) {
        double plm1 = std::sqrt(2.0 * am + 3.0) * x * pmm;
        double plm2 = pmm;
        val = plm1;
        for (int l = am + 2; l <= ell; ++l) {
            double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(am) * am));
            double lp = l - 1.0;
            double b = std::sqrt((lp * lp - double(am) * am) / (4.0 * lp * lp - 1.0));
            val = a * (x * plm1 - b * plm2);
            plm2 = plm1;
            plm1 = val;
        }
    }
    double phi = point.longitude();
    std::complex<double> y = val * std::polar(1.0, am * phi);
    if (m < 0) {
        y = std::conj(y);
        if (am % 2 != 0) y = -y;
    }
    return y;
}

double mehler_dirichlet_p(int ell, double theta, const AccuracyPolicy& policy) {
    policy.validate();
    if (ell < 1) throw std::domain_error("mehler_dirichlet_p: requires l >= 1");
    if (!(theta > 0.0 && theta < M_PI))
        throw std::domain_error("mehler_dirichlet_p: requires theta in (0, pi)");

    // Substitution x = sin(psi/2)/sin(theta/2) turns the endpoint weight into
    // (1 - x^2)^(-1/2); the even extension is a Gauss-Chebyshev integral,
    //   P_l(cos theta) = (1/n) sum_k f(|x_k|),  x_k = cos(pi (2k-1) / (2n)).
    const double sh = std::sin(0.5 * theta);
    const double halfl = ell + 0.5;
    auto f = [&](double xa) {
        double psi = 2.0 * std::asin(xa * sh);
        return std::cos(halfl * psi) / std::cos(0.5 * psi);
    };

    int n = std::max(16, policy.quadrature_nodes);
    const int n_limit = std::max(1 << 15, 16 * (ell + 1));
    double prev = std::numeric_limits<double>::quiet_NaN();
    while (n <= n_limit) {
        KahanSum acc;
        for (int k = 1; k <= n; ++k)
            acc.add(f(std::fabs(std::cos(M_PI * (2.0 * k - 1.0) / (2.0 * n)))));
        double cur = acc.value() / n;
        if (!std::isnan(prev) &&
            std::fabs(cur - prev) <= std::max(policy.abs_tol, policy.rel_tol * std::fabs(cur)))
            return cur;
        prev = cur;
        n *= 2;
    }
    throw ConvergenceError("mehler_dirichlet_p: quadrature did not settle at l=" +
                           std::to_string(ell));
}

namespace detail {

namespace {

// Euler-Maclaurin; accurate for s >= 0.5 (s != 1).
double zeta_euler_maclaurin(double s) {
    const int n = 64;
    KahanSum sum;
    for (int k = 1; k < n; ++k) sum.add(std::pow(double(k), -s));
    double result = sum.value();
    result += std::pow(double(n), 1.0 - s) / (s - 1.0);
    result += 0.5 * std::pow(double(n), -s);
    // Euler-Maclaurin corrections: B_2j/(2j)! * (s)_{2j-1} * n^(-s-2j+1).
    double poch = s;          // (s)_1
    double fact = 2.0;        // (2j)!
    double npow = std::pow(double(n), -s - 1.0);
    for (std::size_t j = 1; j <= std::size(kBernoulli); ++j) {
        result += kBernoulli[j - 1] / fact * poch * npow;
        double m = 2.0 * j;
        poch *= (s + m - 1.0) * (s + m);
        fact *= (m + 1.0) * (m + 2.0);
        npow /= double(n) * double(n);
    }
    return result;
}

}  // namespace

double zeta_real(double s) {
    if (s == 1.0) throw std::domain_error("zeta_real: pole at s = 1");
    // Euler-Maclaurin loses the factorial race for s far below zero; reflect
    // those through the functional equation
    //   zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s),
    // keeping the direct formula near zero where 1-s would sit at the pole.
    if (s >= -0.25) return zeta_euler_maclaurin(s);
    if (s < -60.0) throw std::domain_error("zeta_real: argument below supported range");
    return std::pow(2.0, s) * std::pow(M_PI, s - 1.0) * std::sin(0.5 * M_PI * s) *
           std::tgamma(1.0 - s) * zeta_euler_maclaurin(1.0 - s);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need matching inputs with >= 2 points");
    double n = double(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    double slope = sxy / sxx;
    double intercept = my - slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - intercept - slope * x[i];
        ss += r * r;
    }
    return {intercept, slope, std::sqrt(ss / n)};
}

}  // namespace detail

double riemann_zeta(double s) {
    if (s <= 1.0) throw std::domain_error("riemann_zeta: requires s > 1");
    return detail::zeta_real(s);
}

double harmonic_number(int n) {
    if (n < 0) throw std::domain_error("harmonic_number: requires n >= 0");
    KahanSum sum;
    for (int j = 1; j <= n; ++j) sum.add(1.0 / j);
    return sum.value();
}

namespace {

bool near_integer(double s, int& n) {
    double r = std::round(s);
    if (std::fabs(s - r) < 1e-9) {
        n = int(r);
        return true;
    }
    return false;
}

// Li_s(e^x) expanded around x = 0; x = i*psi with |psi| < 1.
std::complex<double> polylog_series(double s, double psi, const AccuracyPolicy& policy) {
    using C = std::complex<double>;
    const C x(0.0, psi);
    C acc;
    int n = 0;
    const bool integer_s = near_integer(s, n);
    if (integer_s) {
        // x^(n-1)/(n-1)! * (H_{n-1} - log(-x)) + sum_{k != n-1} zeta(n-k) x^k / k!
        C xp(1.0, 0.0);
        double fact = 1.0;
        for (int k = 1; k < n; ++k) {
            xp *= x;
            fact *= k;
        }
        acc = xp / fact * (harmonic_number(n - 1) - std::log(-x));
    } else {
        acc = std::tgamma(1.0 - s) * std::pow(-x, s - 1.0);
    }
    C term_pow(1.0, 0.0);
    double fact = 1.0;
    int quiet = 0;
    for (int k = 0; k <= 40; ++k) {
        if (k > 0) {
            term_pow *= x;
            fact *= k;
        }
        if (!(integer_s && k == n - 1)) {
            double zk = detail::zeta_real(s - k);
            C term = zk * term_pow / fact;
            acc += term;
            double tol = std::max(policy.abs_tol, policy.rel_tol * std::abs(acc));
            quiet = (std::abs(term) < 0.1 * tol) ? quiet + 1 : 0;
            if (quiet >= 3) return acc;
        }
    }
    throw ConvergenceError("polylog_expansion: series did not converge");
}

// Direct summation with an iterated Abel-transformed tail; requires e^{i psi}
// to be bounded away from 1.
std::complex<double> polylog_direct(double s, double psi, const AccuracyPolicy& policy) {
    using C = std::complex<double>;
    const long head = std::min<long>(512, policy.max_terms);
    C acc;
    for (long k = 1; k <= head; ++k) acc += std::pow(double(k), -s) * std::polar(1.0, k * psi);

    const C one_minus_z = 1.0 - std::polar(1.0, psi);
    const C inv = 1.0 / one_minus_z;
    constexpr int kLevels = 12;
    // Difference triangle of a_k = k^(-s) at k = head+1 .. head+1+kLevels.
    double d[kLevels + 1];
    for (int i = 0; i <= kLevels; ++i) d[i] = std::pow(double(head + 1 + i), -s);
    C tail;
    C inv_pow = inv;
    for (int j = 0; j < kLevels; ++j) {
        tail += d[j] * std::polar(1.0, (head + 1 + j) * psi) * inv_pow;
        inv_pow *= inv;
        for (int i = kLevels; i > j; --i) d[i] -= d[i - 1];
    }
    double remainder = 2.0 * std::fabs(d[kLevels]) * std::abs(inv_pow);
    acc += tail;
    if (remainder > std::max(policy.abs_tol, policy.rel_tol * std::abs(acc)))
        throw ConvergenceError("polylog: tail estimate above tolerance");
    return acc;
}

}  // namespace

std::complex<double> polylog(double s, double psi, const AccuracyPolicy& policy) {
    policy.validate();
    if (s <= 1.0) throw std::domain_error("polylog: requires s > 1");
    if (!(psi > 0.0 && psi < 2.0 * M_PI))
        throw std::domain_error("polylog: requires psi in (0, 2pi)");
    // Crossover 0.5 between the z ~ 1 expansion and direct summation.
    if (psi < 0.5) return polylog_series(s, psi, policy);
    if (2.0 * M_PI - psi < 0.5) return polylog_series(s, psi - 2.0 * M_PI, policy);
    return polylog_direct(s, psi, policy);
}

std::complex<double> polylog_expansion(double s, double psi, const AccuracyPolicy& policy) {
    policy.validate();
    if (s <= 1.0) throw std::domain_error("polylog_expansion: requires s > 1");
    if (!(psi > 0.0 && psi < 1.0))
        throw std::domain_error("polylog_expansion: requires psi in (0, 1)");
    return polylog_series(s, psi, policy);
}

double beta_function(double a, double b) {
    if (a <= 0.0 || b <= 0.0) throw std::domain_error("beta_function: requires a, b > 0");
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

namespace {

double beta_continued_fraction(double a, double b, double x) {
    const int max_it = 400;
    const double eps = 3e-16, fpmin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_it; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw ConvergenceError("incomplete_beta: continued fraction did not converge");
}

double regularized_incomplete_beta(double y, double a, double b) {
    if (y == 0.0) return 0.0;
    if (y == 1.0) return 1.0;
    double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(y) +
                   b * std::log1p(-y);
    double bt = std::exp(ln_bt);
    if (y < (a + 1.0) / (a + b + 2.0)) return bt * beta_continued_fraction(a, b, y) / a;
    return 1.0 - bt * beta_continued_fraction(b, a, 1.0 - y) / b;
}

}  // namespace

double incomplete_beta(double y, double a, double b) {
    if (a <= 0.0 || b <= 0.0) throw std::domain_error("incomplete_beta: requires a, b > 0");
    if (y < 0.0 || y > 1.0) throw std::domain_error("incomplete_beta: requires y in [0, 1]");
    return regularized_incomplete_beta(y, a, b) * beta_function(a, b);
}

double digamma(double x) {
    if (x <= 0.0) throw std::domain_error("digamma: requires x > 0");
    double r = 0.0;
    while (x < 8.0) {
        r -= 1.0 / x;
        x += 1.0;
    }
    double ix = 1.0 / x, ix2 = ix * ix;
    double series =
        ix2 * (1.0 / 12 -
               ix2 * (1.0 / 120 -
                      ix2 * (1.0 / 252 -
                             ix2 * (1.0 / 240 -
                                    ix2 * (1.0 / 132 - ix2 * (691.0 / 32760 - ix2 / 12))))));
    return r + std::log(x) - 0.5 * ix - series;
}

double b_ln(double a, double b) {
    if (a <= 0.0 || b <= 0.0) throw std::domain_error("b_ln: requires a, b > 0");
    return beta_function(a, b) * (digamma(a) - digamma(a + b));
}

ValueWithTail legendre_series_sum(double s, double theta, const AccuracyPolicy& policy) {
    policy.validate();
    if (s <= 1.0) throw std::domain_error("legendre_series_sum: requires s > 1");
    if (!(theta > 0.0 && theta <= M_PI))
        throw std::domain_error("legendre_series_sum: requires theta in (0, pi]");

    // Crude tail bound sum_{l>L} l^(-s) <= L^(1-s)/(s-1), using |P_l| <= 1.
    double l_crude = std::pow(policy.abs_tol * (s - 1.0), -1.0 / (s - 1.0));
    if (l_crude > double(policy.max_terms))
        throw BudgetError("legendre_series_sum: tolerance unreachable within max_terms");
    long l_stop = std::max<long>({long(std::ceil(l_crude)), recommended_l_max(theta), 64});
    l_stop = std::min<long>(l_stop, policy.max_terms);

    const double t = std::cos(theta);
    KahanSum sum;
    double pm2 = 1.0, pm1 = t;
    sum.add(t);  // l = 1
    for (long l = 2; l <= l_stop; ++l) {
        double p = ((2.0 * l - 1.0) * t * pm1 - (l - 1.0) * pm2) / l;
        pm2 = pm1;
        pm1 = p;
        sum.add(std::pow(double(l), -s) * p);
    }
    double tail = std::pow(double(l_stop), 1.0 - s) / (s - 1.0);
    return {sum.value(), tail};
}

SumPolyReport sum_poly_asymptotic_check(double s, std::span<const double> theta_grid,
                                        const AccuracyPolicy& policy) {
    if (theta_grid.size() < 8)
        throw std::invalid_argument("sum_poly_asymptotic_check: need >= 8 grid points");
    double t_min = *std::min_element(theta_grid.begin(), theta_grid.end());
    double t_max = *std::max_element(theta_grid.begin(), theta_grid.end());
    if (!(t_min > 0.0 && t_max <= 0.1))
        throw std::invalid_argument("sum_poly_asymptotic_check: grid must lie in (0, 0.1]");
    if (t_max / t_min < 10.0)
        throw std::invalid_argument("sum_poly_asymptotic_check: grid must span a decade");

    // Evaluate with the accuracy one million terms buys; the oscillatory
    // cancellation makes the true error far smaller than the crude bound.
    AccuracyPolicy call = policy;
    call.abs_tol = std::max(policy.abs_tol, std::pow(1e6, 1.0 - s) / (s - 1.0));

    SumPolyReport rep;
    rep.s = s;
    const double zeta_s = riemann_zeta(s);
    std::vector<double> log_u, log_gap, u_all, gap_all;
    for (double theta : theta_grid) {
        ValueWithTail sv = legendre_series_sum(s, theta, call);
        rep.theta.push_back(theta);
        rep.sum.push_back(sv.value);
        rep.tail_bound.push_back(sv.tail_bound);
        double u = std::sin(0.5 * theta);
        double gap = zeta_s - sv.value;
        u_all.push_back(u);
        gap_all.push_back(gap);
        if (gap > 0.0) {
            log_u.push_back(std::log(u));
            log_gap.push_back(std::log(gap));
        }
    }
    if (log_u.size() < theta_grid.size())
        throw ConsistencyError("sum_poly_asymptotic_check: zeta(s) - S(theta) not positive");

    if (s < 3.0) {
        rep.case_name = "1<s<3";
        rep.predicted_order = s - 1.0;
    } else if (s == 3.0) {
        rep.case_name = "s=3";
        rep.predicted_order = 2.0;
    } else {
        rep.case_name = "s>3";
        rep.predicted_order = 2.0;
    }

    auto line = detail::fit_line(log_u, log_gap);
    rep.fitted_slope = line.slope;
    rep.fit_residual = line.rms_residual;

    if (s == 3.0) {
        // gap = a u^2 |ln u| + b u^2, fitted in linear space.
        double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
        for (std::size_t i = 0; i < u_all.size(); ++i) {
            double u2 = u_all[i] * u_all[i];
            double f1 = u2 * std::fabs(std::log(u_all[i]));
            double f2 = u2;
            s11 += f1 * f1;
            s12 += f1 * f2;
            s22 += f2 * f2;
            r1 += f1 * gap_all[i];
            r2 += f2 * gap_all[i];
        }
        double det = s11 * s22 - s12 * s12;
        double a = (r1 * s22 - r2 * s12) / det;
        double b = (s11 * r2 - s12 * r1) / det;
        double ss_res = 0, ss_sig = 0;
        for (std::size_t i = 0; i < u_all.size(); ++i) {
            double u2 = u_all[i] * u_all[i];
            double model = a * u2 * std::fabs(std::log(u_all[i])) + b * u2;
            ss_res += (gap_all[i] - model) * (gap_all[i] - model);
            ss_sig += gap_all[i] * gap_all[i];
        }
        rep.fit_residual = std::sqrt(ss_res / ss_sig);
    } else if (line.rms_residual > 0.5) {
        throw ConsistencyError("sum_poly_asymptotic_check: slope fit residual too large");
    }

    if (std::fabs(s - 2.0) < 1e-12) {
        std::size_t i_min = 0;
        for (std::size_t i = 1; i < rep.theta.size(); ++i)
            if (rep.theta[i] < rep.theta[i_min]) i_min = i;
        rep.ratio_s2 = (zeta_s - rep.sum[i_min]) / std::sin(0.5 * rep.theta[i_min]);
    }
    return rep;
}

}  // namespace sgfield
