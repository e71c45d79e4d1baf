#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace hawkes {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

} // namespace detail

/// Deterministic sub-stream seed for one path: the path index is mixed into
/// the master seed so paths can be generated independently and in parallel.
inline std::uint64_t path_seed(std::uint64_t master, std::uint64_t path_index) {
    return detail::splitmix64(master + 0x9E3779B97F4A7C15ull * (path_index + 1));
}

/// Seeded generator with explicitly-coded uniform and exponential draws, so
/// outputs are identical wherever the same mt19937_64 stream is produced.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Exponential with the given rate; +inf when the rate is zero.
    double exponential(double rate) {
        if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
        return -std::log1p(-uniform()) / rate;
    }

    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace hawkes
