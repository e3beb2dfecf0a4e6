#include "mobopt/rng.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

namespace mobopt {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

Rng::Rng(std::uint64_t seed) : seed_(seed), state_(seed) {
    // Warm up so that small seeds do not produce correlated first draws.
    for (int i = 0; i < 4; ++i)
        splitmix64(state_);
}

Rng Rng::stream(std::string_view name) const {
    std::uint64_t mix = seed_ ^ fnv1a(name);
    splitmix64(mix);
    return Rng(mix);
}

Rng Rng::stream(std::string_view name, std::uint64_t index) const {
    std::uint64_t mix = seed_ ^ fnv1a(name);
    mix ^= 0x9e3779b97f4a7c15ull * (index + 1);
    splitmix64(mix);
    return Rng(mix);
}

std::uint64_t Rng::next_u64() {
    return splitmix64(state_);
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double Rng::normal() {
    // Box-Muller without the cached second value, so a stream's draw
    // sequence depends only on how many normals were requested.
    double u1 = uniform();
    while (u1 <= 0.0)
        u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t n) {
    assert(n > 0);
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v = next_u64();
    while (v >= limit)
        v = next_u64();
    return v % n;
}

} // namespace mobopt
