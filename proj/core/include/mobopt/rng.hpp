#ifndef MOBOPT_RNG_HPP
#define MOBOPT_RNG_HPP

#include <cstdint>
#include <string_view>

namespace mobopt {

/// Deterministic pseudo-random stream with named sub-stream splitting.
///
/// Every run derives all of its randomness from one 64-bit master seed.
/// Sub-streams are derived by hashing a name (and optional index) into the
/// parent's seed, so consuming one stream never perturbs another and adding
/// a component does not shift the draws of existing ones.
///
/// The generator is xoshiro-style splitmix64 feeding an explicit
/// Box-Muller transform; uniform() and normal() are therefore bit-stable
/// across standard libraries and build flags.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Derive an independent stream from this stream's seed and a name.
    Rng stream(std::string_view name) const;
    Rng stream(std::string_view name, std::uint64_t index) const;

    std::uint64_t next_u64();

    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);
    /// Standard normal draw (Box-Muller, no cached spare).
    double normal();
    /// Uniform integer in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n);

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

/// splitmix64 step, exposed for seed mixing.
std::uint64_t splitmix64(std::uint64_t& state);

/// FNV-1a hash of a string, used for stream naming.
std::uint64_t fnv1a(std::string_view s);

} // namespace mobopt

#endif
