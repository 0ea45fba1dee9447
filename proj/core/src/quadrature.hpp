#pragma once

#include <cstddef>
#include <functional>

namespace sgfield::detail {

// 16-point Gauss-Legendre rule on [-1, 1].
inline constexpr double kGL16Node[8] = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
inline constexpr double kGL16Weight[8] = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

template <typename F>
double gauss_legendre_16(const F& f, double a, double b) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 8; ++i) {
        double dx = half * kGL16Node[i];
        acc += kGL16Weight[i] * (f(mid - dx) + f(mid + dx));
    }
    return acc * half;
}

template <typename F>
double composite_gauss_legendre(const F& f, double a, double b, int panels) {
    if (panels < 1) panels = 1;
    double h = (b - a) / panels;
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) acc += gauss_legendre_16(f, a + p * h, a + (p + 1) * h);
    return acc;
}

}  // namespace sgfield::detail
