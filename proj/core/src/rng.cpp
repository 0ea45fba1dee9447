#include "sgfield/rng.hpp"

#include <cmath>

namespace sgfield {

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t replicate, std::string_view label) {
    std::uint64_t tag = fnv1a(label);
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(replicate), static_cast<std::uint32_t>(replicate >> 32),
        static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
    engine_.seed(seq);
}

double RngStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_pos() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    double u1 = uniform_pos();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    cached_normal_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

}  // namespace sgfield
