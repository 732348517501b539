#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace uprop {

/// splitmix64 step; used for seeding and for deriving per-run seeds.
std::uint64_t splitmix64_next(std::uint64_t& state);

/// Deterministic seed schedule: mixes a master seed with two indices so that
/// (param, repetition) cells get independent, reproducible streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

/// Seedable counter-free PRNG with cross-platform bit-exact streams.
///
/// Algorithms: "xoshiro256++" (default) and "splitmix64". The same
/// (algorithm, seed) pair always yields the identical output sequence.
/// Single-owner: not safe for concurrent use; create one handle per thread.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::string_view algorithm = "xoshiro256++");

    std::uint64_t next_u64();

    /// Uniform double in [0, 1), 53-bit resolution.
    double next_double();

    const std::string& algorithm() const { return algorithm_; }
    std::uint64_t seed() const { return seed_; }

private:
    enum class Kind { Xoshiro256pp, Splitmix64 };
    Kind kind_;
    std::string algorithm_;
    std::uint64_t seed_;
    std::uint64_t state_[4];
};

} // namespace uprop
