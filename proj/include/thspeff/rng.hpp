// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace thspeff {

using Engine = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stable seed for stream (a, b) under a master seed. Extending a grid never
/// changes the seeds of points already on it.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept
{
    return mix64(mix64(mix64(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL + 1));
}

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

/// Unbiased integer in [0, n) (Lemire's multiply-shift with rejection).
inline std::uint64_t uniform_below(Engine& eng, std::uint64_t n)
{
    using u128 = unsigned __int128;
    std::uint64_t x = eng();
    u128 m = static_cast<u128>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
        const std::uint64_t threshold = (0 - n) % n;
        while (low < threshold) {
            x = eng();
            m = static_cast<u128>(x) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

inline int random_sign(Engine& eng) { return (eng() >> 63) ? -1 : 1; }

/// Standard normal via Box-Muller; kept local so streams are identical across
/// standard library implementations.
inline double standard_normal(Engine& eng)
{
    constexpr double two_pi = 6.283185307179586476925286766559;
    constexpr double scale = 0x1.0p-53;
    double u1 = 0.0;
    do {
        u1 = static_cast<double>(eng() >> 11) * scale;
    } while (u1 <= 0.0);
    const double u2 = static_cast<double>(eng() >> 11) * scale;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

} // namespace thspeff
