#include "uprop/rng.hpp"

#include "uprop/errors.hpp"

namespace uprop {

std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = master;
    std::uint64_t h = splitmix64_next(s);
    s = h ^ (a * 0x9E3779B97F4A7C15ULL);
    h = splitmix64_next(s);
    s = h ^ (b * 0xC2B2AE3D27D4EB4FULL);
    return splitmix64_next(s);
}

namespace {

inline std::uint64_t rotl64(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

Rng::Rng(std::uint64_t seed, std::string_view algorithm)
    : algorithm_(algorithm), seed_(seed) {
    if (algorithm == "xoshiro256++") {
        kind_ = Kind::Xoshiro256pp;
    } else if (algorithm == "splitmix64") {
        kind_ = Kind::Splitmix64;
    } else {
        throw ArgumentError("unknown rng algorithm: " + std::string(algorithm));
    }
    // Expand the 64-bit seed into the full state through splitmix64, as
    // recommended by the xoshiro reference implementation.
    std::uint64_t s = seed;
    for (auto& word : state_) {
        word = splitmix64_next(s);
    }
}

std::uint64_t Rng::next_u64() {
    if (kind_ == Kind::Splitmix64) {
        return splitmix64_next(state_[0]);
    }
    std::uint64_t* s = state_;
    const std::uint64_t result = rotl64(s[0] + s[3], 23) + s[0];
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl64(s[3], 45);
    return result;
}

double Rng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

} // namespace uprop
