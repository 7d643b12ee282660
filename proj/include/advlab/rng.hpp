#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "advlab/errors.hpp"

namespace advlab {

// FNV-1a over a byte string; also used as the file checksum.
std::uint64_t fnv1a64(std::string_view bytes);

/// Deterministic random source. mt19937_64 output is pinned by the C++
/// standard; the distributions here are hand-rolled because the standard
/// library's distribution objects are implementation-defined and would
/// break bit-reproducibility across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) {
        if (!(lo < hi)) throw value_error("uniform(lo,hi) needs lo < hi");
        return lo + (hi - lo) * uniform01();
    }

    // Uniform index in [0, n). n must be nonzero.
    std::size_t index(std::size_t n) {
        if (n == 0) throw value_error("index(n) needs n > 0");
        return static_cast<std::size_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Box-Muller, one value per call (the second root is discarded so the
    // stream position stays a simple function of the call count).
    double normal(double mean, double stddev);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[index(i)]);
        }
    }

private:
    std::mt19937_64 gen_;
};

/// Named substream: all randomness in a run flows from one u64 seed, and
/// each consumer (dataset, init, shuffle, sampling) gets its own stream so
/// partial reruns stay aligned.
Rng subrng(std::uint64_t seed, std::string_view stream);
Rng subrng(std::uint64_t seed, std::string_view stream, std::uint64_t index);

}  // namespace advlab
