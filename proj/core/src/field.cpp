#include "sgfield/field.hpp"

#include <cmath>
#include <stdexcept>

#include "sgfield/special_functions.hpp"

namespace sgfield {

HarmonicCoefficients::HarmonicCoefficients(int l_max) : l_max_(l_max) {
    if (l_max < 1) throw std::domain_error("HarmonicCoefficients: requires l_max >= 1");
    a_.assign(std::size_t(l_max) * (l_max + 3) / 2, {0.0, 0.0});
}

void HarmonicCoefficients::check_range(int ell, int m) const {
    if (ell < 1 || ell > l_max_ || std::abs(m) > ell)
        throw std::out_of_range("HarmonicCoefficients: (l, m) outside range");
}

std::complex<double> HarmonicCoefficients::get(int ell, int m) const {
    check_range(ell, m);
    if (m >= 0) return a_[packed_index(ell, m)];
    std::complex<double> v = std::conj(a_[packed_index(ell, -m)]);
    return (-m) % 2 != 0 ? -v : v;
}

void HarmonicCoefficients::set(int ell, int m, std::complex<double> value) {
    check_range(ell, m);
    if (m < 0)
        throw std::out_of_range("HarmonicCoefficients::set: store m >= 0; m < 0 is implied");
    if (m == 0 && value.imag() != 0.0)
        throw ConsistencyError("HarmonicCoefficients: a_{l0} must be real");
    a_[packed_index(ell, m)] = value;
}

HarmonicCoefficients sample_coefficients(const PowerSpectrum& spec, RngStream& rng) {
    HarmonicCoefficients c(spec.l_max());
    auto out = c.packed();
    for (int ell = 1; ell <= spec.l_max(); ++ell) {
        double cl = spec.value(ell);
        double sd_full = std::sqrt(cl);
        double sd_half = std::sqrt(0.5 * cl);
        out[HarmonicCoefficients::packed_index(ell, 0)] = {sd_full * rng.normal(), 0.0};
        for (int m = 1; m <= ell; ++m)
            out[HarmonicCoefficients::packed_index(ell, m)] = {sd_half * rng.normal(),
                                                               sd_half * rng.normal()};
    }
    return c;
}

FieldRealization sample_realization(const PowerSpectrum& spec, std::uint64_t seed,
                                    std::uint64_t replicate) {
    RngStream rng(seed, replicate, "coeffs");
    return {sample_coefficients(spec, rng), spec, seed, replicate, 0, false};
}

double evaluate_at(const FieldRealization& realization, const SpherePoint& point) {
    const auto& c = realization.coefficients;
    const int l_max = c.l_max();
    const double phi = point.longitude();
    auto a = c.packed();
    // T = sum_l a_l0 Ptilde_l^0 + 2 sum_{m>0} Re[a_lm e^{im phi}] Ptilde_l^m.
    double acc0 = 0.0;
    std::vector<double> re_m(l_max + 1, 0.0), im_m(l_max + 1, 0.0);
    normalized_legendre_scan(l_max, point.z(), [&](int m, int l, double plm) {
        if (l == 0) return;  // monopole excluded
        auto alm = a[HarmonicCoefficients::packed_index(l, m)];
        if (m == 0) {
            acc0 += alm.real() * plm;
        } else {
            re_m[m] += alm.real() * plm;
            im_m[m] += alm.imag() * plm;
        }
    });
    double acc = acc0;
    for (int m = 1; m <= l_max; ++m) {
        double cm = std::cos(m * phi), sm = std::sin(m * phi);
        acc += 2.0 * (re_m[m] * cm - im_m[m] * sm);
    }
    return acc;
}

std::vector<double> evaluate(const FieldRealization& realization,
                             std::span<const SpherePoint> points, int threads) {
    std::vector<double> out(points.size());
    parallel_for(std::int64_t(points.size()), threads,
                 [&](std::int64_t i) { out[i] = evaluate_at(realization, points[i]); });
    return out;
}

ValueWithTail covariance_at_angle(const PowerSpectrum& spec, double theta) {
    const int l_max = spec.l_max();
    const double t = std::cos(theta);
    KahanSum sum;
    double pm2 = 1.0, pm1 = t;
    sum.add((3.0 / (4.0 * M_PI)) * spec.value(1) * t);
    for (int l = 2; l <= l_max; ++l) {
        double p = ((2.0 * l - 1.0) * t * pm1 - (l - 1.0) * pm2) / l;
        pm2 = pm1;
        pm1 = p;
        sum.add((2.0 * l + 1.0) / (4.0 * M_PI) * spec.value(l) * p);
    }
    double L = double(l_max);
    double tail = spec.c0() / (4.0 * M_PI) *
                  (2.0 * std::pow(L, 2.0 - spec.alpha()) / (spec.alpha() - 2.0) +
                   std::pow(L, 1.0 - spec.alpha()) / (spec.alpha() - 1.0));
    return {sum.value(), tail};
}

ValueWithTail covariance(const PowerSpectrum& spec, const SpherePoint& x, const SpherePoint& y) {
    return covariance_at_angle(spec, geodesic_distance(x, y));
}

FieldRealization pseudo_diff(const FieldRealization& realization, int k) {
    if (k < 1) throw std::domain_error("pseudo_diff: requires k >= 1");
    FieldRealization out = realization;
    auto a = out.coefficients.packed();
    const int l_max = out.coefficients.l_max();
    for (int ell = 1; ell <= l_max; ++ell) {
        double lam = 1.0 + double(ell) * (ell + 1.0);
        // Integer powers kept exact so that squaring the k=1 factor reproduces
        // the k=2 spectrum to rounding.
        double factor = (k % 2 == 0) ? std::pow(lam, double(k / 2))
                                     : std::sqrt(lam) * std::pow(lam, double((k - 1) / 2));
        for (int m = 0; m <= ell; ++m)
            a[HarmonicCoefficients::packed_index(ell, m)] *= factor;
    }
    out.derivative_order = realization.derivative_order + k;
    const PowerSpectrum& base = realization.spectrum;
    if (!realization.variance_warning && base.alpha() > 2.0 + 2.0 * k) {
        out.spectrum = base.derived(k);
    } else {
        out.variance_warning = true;  // divergent at infinite l_max; finite here
    }
    return out;
}

RingEvaluator::RingEvaluator(const FieldRealization& realization, double colatitude) {
    const auto& c = realization.coefficients;
    const int l_max = c.l_max();
    g_.assign(l_max + 1, {0.0, 0.0});
    auto a = c.packed();
    normalized_legendre_scan(l_max, std::cos(colatitude), [&](int m, int l, double plm) {
        if (l == 0) return;
        g_[m] += a[HarmonicCoefficients::packed_index(l, m)] * plm;
    });
}

double RingEvaluator::operator()(double phi) const {
    double acc = g_[0].real();
    const double c1 = std::cos(phi), s1 = std::sin(phi);
    double cm = c1, sm = s1;
    for (std::size_t m = 1; m < g_.size(); ++m) {
        acc += 2.0 * (g_[m].real() * cm - g_[m].imag() * sm);
        double cn = cm * c1 - sm * s1;
        sm = sm * c1 + cm * s1;
        cm = cn;
    }
    return acc;
}

}  // namespace sgfield
