#include "advlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace advlab {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

double Rng::normal(double mean, double stddev) {
    if (stddev < 0.0) throw value_error("normal stddev must be >= 0");
    // Guard u1 away from 0 so log stays finite.
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + stddev * z;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

Rng subrng(std::uint64_t seed, std::string_view stream) {
    return Rng(splitmix64(seed ^ fnv1a64(stream)));
}

Rng subrng(std::uint64_t seed, std::string_view stream, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(seed ^ fnv1a64(stream)) + index));
}

}  // namespace advlab
