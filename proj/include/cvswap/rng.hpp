#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace cvswap::rng {

/// Recorded in every Monte Carlo output so runs can be reproduced by any
/// implementation of the same generator.
inline constexpr std::string_view kAlgorithm =
    "mt19937_64 per chunk, chunk seed = splitmix64(seed ^ splitmix64(chunk)), "
    "uniform = (u64 >> 11 + 0.5) * 2^-53, normals by Box-Muller (cos branch then sin branch)";

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return splitmix64(seed ^ splitmix64(stream));
}

/// Standard normal draws with a fully specified algorithm (std::normal_distribution
/// is implementation-defined, so it is not used).
class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    double normal() noexcept;

    void fill(std::span<double> out) noexcept;

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace cvswap::rng
