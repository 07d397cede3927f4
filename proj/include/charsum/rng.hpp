#pragma once

#include <cstdint>

// Counter-based generator: every draw is a pure function of (seed, stream,
// counter), so parallel samplers can jump anywhere in the stream without
// sharing state.  The finalizer is the splitmix64 output stage.

namespace charsum::rng {

constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

constexpr std::uint64_t key(std::uint64_t seed, std::uint64_t stream,
                            std::uint64_t counter) noexcept {
    return mix64(seed ^ mix64(stream ^ mix64(counter)));
}

// Uniform on [0,1), 53 random bits.
constexpr double uniform01(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform on (0,1]; safe to pass to log().
constexpr double uniform01_open(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

constexpr int sign(std::uint64_t bits) noexcept {
    return (bits >> 63) ? -1 : 1;
}

}  // namespace charsum::rng
