#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sgfield {

/// Named substream of the global seed. Every stochastic task owns one stream
/// keyed by (seed, replicate, label) so results do not depend on scheduling.
///
/// The Gaussian sampler is a fixed Box-Muller transform over mt19937_64 output
/// rather than std::normal_distribution, whose draw sequence is
/// implementation-defined.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t replicate, std::string_view label = "");

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on (0, 1]; safe as a log argument.
    double uniform_pos();
    /// Standard normal.
    double normal();

  private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace sgfield
