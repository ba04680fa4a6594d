#pragma once

#include <cstdint>
#include <limits>

namespace crooked {

// Counter-based generator: output k of stream (seed, stream) is a SplitMix64
// finalization of a key derived from the triple. Streams are cheap to fork and
// two streams built from the same (seed, stream) pair produce identical output.
class RngStream {
public:
    using result_type = std::uint64_t;

    constexpr RngStream() = default;
    constexpr explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept { return next_u64(); }

    constexpr std::uint64_t next_u64() noexcept {
        return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
    }

    // Uniform integer in [0, bound) by rejection; bound must be positive.
    constexpr std::uint64_t uniform(std::uint64_t bound) noexcept {
        const std::uint64_t limit = max() - max() % bound;
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % bound;
    }

    constexpr double uniform01() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Independent child stream; does not advance this one.
    [[nodiscard]] constexpr RngStream fork(std::uint64_t substream) const noexcept {
        RngStream child;
        child.key_ = mix(key_ ^ mix(substream * 0xd1b54a32d192ed03ULL + 1));
        return child;
    }

    [[nodiscard]] constexpr std::uint64_t position() const noexcept { return counter_; }

private:
    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

// Seed of trial `trial` in an experiment seeded with `seed`.
[[nodiscard]] constexpr std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) noexcept {
    return RngStream(seed, 0x747269616cULL).fork(trial).next_u64();
}

// Well-known stream ids so coupled experiments draw from matching streams.
namespace streams {
inline constexpr std::uint64_t public_randomness = 1;
inline constexpr std::uint64_t round_functions = 2;
inline constexpr std::uint64_t ideal_object = 3;
inline constexpr std::uint64_t distinguisher = 4;
inline constexpr std::uint64_t simulator_extra = 5;
}  // namespace streams

}  // namespace crooked
