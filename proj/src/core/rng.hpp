#pragma once

#include <cstdint>
#include <utility>

namespace cle {

// Counter-addressed random streams: a master seed plus a stream counter give
// an independent generator, so sample j of run k never depends on how many
// draws earlier samples consumed. Streams are stable across platforms.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, std::uint64_t counter);

    std::uint64_t next_u64();
    // Uniform on [0, 1), 53-bit resolution.
    double next_uniform();
    // Independent standard normals via Box-Muller; consumes two uniforms.
    std::pair<double, double> next_gaussian_pair();

private:
    std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace cle
