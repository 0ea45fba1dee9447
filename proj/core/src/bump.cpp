#include "sgfield/bump.hpp"

#include <cmath>
#include <stdexcept>

#include "quadrature.hpp"

namespace sgfield {

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= double(n - k + i) / i;
    return r;
}

// Centered cardinal B-spline B_n (n-fold convolution of 1_[-1/2,1/2]),
// via the alternating truncated-power form. Stable enough for n <= 16.
double cardinal_bspline(int n, double t) {
    double at = std::fabs(t);
    if (at >= 0.5 * n) return 0.0;
    double fact = 1.0;
    for (int i = 2; i < n; ++i) fact *= i;
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
        double base = t + 0.5 * n - k;
        if (base <= 0.0) break;  // remaining terms vanish
        double term = binomial(n, k) * std::pow(base, n - 1);
        acc += (k % 2 == 0) ? term : -term;
    }
    return acc / fact;
}

double sinc(double x) {
    if (std::fabs(x) < 1e-6) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

}  // namespace

SmoothingKernel::SmoothingKernel(int convolution_order) : order_(convolution_order) {
    if (order_ < 2 || order_ > 8)
        throw std::domain_error("SmoothingKernel: convolution order must be in [2, 8]");
    mass_ = std::pow(double(order_), -double(order_));
    decay_bound_ = std::pow(4.0 * order_, double(order_));
}

double SmoothingKernel::ghat(double s) const {
    // q scaled triangles convolved: q^(1-q) B_{2q}(q s), support (-1, 1).
    return std::pow(double(order_), 1.0 - order_) * cardinal_bspline(2 * order_, order_ * s);
}

double SmoothingKernel::transform(double u) const {
    double x = u / (2.0 * order_);
    return mass_ * std::pow(sinc(x), 2.0 * order_);
}

double b_ell(const SmoothingKernel& kernel, double epsilon, int ell,
             const AccuracyPolicy& policy) {
    policy.validate();
    if (!(epsilon > 0.0 && epsilon < M_PI))
        throw std::domain_error("b_ell: requires epsilon in (0, pi)");
    if (ell < 1) throw std::domain_error("b_ell: requires l >= 1");

    const double omega = epsilon * std::sqrt(double(ell) * (ell + 1.0));
    const int q = kernel.order();
    auto f = [&](double s) { return kernel.ghat(s) * std::cos(omega * s); };

    // Ghat is even: integrate 2 * int_0^1, panel boundaries on the spline
    // knots j/q, each knot interval subdivided to <= ~4 radians of phase.
    auto integrate = [&](int refine) {
        double acc = 0.0;
        for (int j = 0; j < q; ++j) {
            double a = double(j) / q, b = double(j + 1) / q;
            int panels = refine * std::max(1, int(std::ceil(omega * (b - a) / 4.0)));
            acc += detail::composite_gauss_legendre(f, a, b, panels);
        }
        return 2.0 * acc;
    };

    double prev = integrate(1);
    for (int refine = 2; refine <= 8; refine *= 2) {
        double cur = integrate(refine);
        if (std::fabs(cur - prev) <=
            std::max(policy.abs_tol, policy.rel_tol * kernel.ghat_mass()))
            return cur;
        prev = cur;
    }
    throw ConvergenceError("b_ell: oscillatory quadrature under-resolved at l=" +
                           std::to_string(ell));
}

BumpProfile::BumpProfile(const SmoothingKernel& kernel, double epsilon, int l_max,
                         const AccuracyPolicy& policy, int threads)
    : kernel_(kernel), epsilon_(epsilon), l_max_(l_max) {
    if (!(epsilon > 0.0 && epsilon < M_PI))
        throw std::domain_error("BumpProfile: requires epsilon in (0, pi)");
    if (l_max < 1) throw std::domain_error("BumpProfile: requires l_max >= 1");
    b_.resize(l_max);
    parallel_for(l_max, threads,
                 [&](std::int64_t i) { b_[i] = b_ell(kernel_, epsilon_, int(i) + 1, policy); });
}

double BumpProfile::b(int ell) const {
    if (ell < 1 || ell > l_max_) throw std::out_of_range("BumpProfile::b: l outside [1, l_max]");
    return b_[ell - 1];
}

double BumpProfile::kappa_l0(int ell) const {
    return std::sqrt((2.0 * ell + 1.0) / (4.0 * M_PI)) * b(ell);
}

ValueWithTail BumpProfile::delta(double theta) const {
    if (theta < 0.0 || theta > M_PI)
        throw std::domain_error("BumpProfile::delta: requires theta in [0, pi]");
    const double t = std::cos(theta);
    KahanSum sum;
    double pm2 = 1.0, pm1 = t;
    sum.add(b_[0] * (3.0 / (4.0 * M_PI)) * t);
    for (int l = 2; l <= l_max_; ++l) {
        double p = ((2.0 * l - 1.0) * t * pm1 - (l - 1.0) * pm2) / l;
        pm2 = pm1;
        pm1 = p;
        sum.add(b_[l - 1] * (2.0 * l + 1.0) / (4.0 * M_PI) * p);
    }
    // |b_l| <= A / (eps l)^(2q) gives the truncation bound.
    const int q = kernel_.order();
    double L = double(l_max_);
    double tail = 3.0 * kernel_.transform_decay_bound() /
                  (4.0 * M_PI * std::pow(epsilon_, 2.0 * q)) *
                  std::pow(L, 2.0 - 2.0 * q) / (2.0 * q - 2.0);
    return {sum.value(), tail};
}

double g_closed_form(double u) {
    if (u < 0.0) throw std::domain_error("g_closed_form: requires u >= 0");
    constexpr double scale = 1.0 / (16.0 * M_PI * M_PI);
    if (u < 1e-4) return scale * (1.0 - u * u / 24.0);
    double s = std::sin(0.25 * u) / (0.25 * u);
    return scale * s * s * s * s;
}

C3Report c3_check(const SmoothingKernel& kernel, std::span<const double> epsilon_grid, int l_max,
                  const AccuracyPolicy& policy, int threads) {
    for (double e : epsilon_grid)
        if (!(e > 0.0 && e <= 0.2))
            throw std::domain_error("c3_check: epsilon grid must lie in (0, 0.2]");

    // c3 from the transform directly; independent of the b_l quadrature path.
    const double upper = 2000.0;
    auto f = [&](double u) { return kernel.transform(u) * u; };
    double c3 = detail::composite_gauss_legendre(f, 0.0, upper, int(upper / 2.0)) / (2.0 * M_PI);

    C3Report rep;
    rep.c3 = c3;
    for (double eps : epsilon_grid) {
        BumpProfile prof(kernel, eps, l_max, policy, threads);
        double v = prof.delta0() * eps * eps;
        rep.epsilon.push_back(eps);
        rep.delta0_eps_sq.push_back(v);
        rep.ratio.push_back(v / c3);
    }
    return rep;
}

double spectral_weight_sum(const BumpProfile& profile, const PowerSpectrum& spec) {
    if (profile.l_max() != spec.l_max())
        throw std::invalid_argument("spectral_weight_sum: profile and spectrum l_max differ");
    return spectral_weight_sum(profile.coefficients(), spec);
}

double spectral_weight_sum(std::span<const double> b, const PowerSpectrum& spec) {
    if (int(b.size()) != spec.l_max())
        throw std::invalid_argument("spectral_weight_sum: coefficients and spectrum l_max differ");
    KahanSum sum;
    for (int l = 1; l <= spec.l_max(); ++l)
        sum.add((2.0 * l + 1.0) / (4.0 * M_PI) * b[l - 1] * b[l - 1] / spec.value(l));
    return sum.value();
}

}  // namespace sgfield
