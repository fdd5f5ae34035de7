#pragma once

#include <cstddef>
#include <cstdint>

namespace exn {

// SplitMix64 output finalizer (Stafford mix13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Derives an independent 64-bit seed from a parent seed and a tag.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
    return mix64(seed ^ mix64(tag + 0x632BE59BD9B4E019ULL));
}

/**
 * Counter-based random stream identified by (seed, stream_id).
 *
 * The i-th 64-bit output (i = 0, 1, ...) is
 *
 *     key   = mix64(seed ^ mix64(stream_id ^ 0xD1B54A32D192ED03))
 *     x_i   = mix64(key + (i + 1) * 0x9E3779B97F4A7C15)
 *
 * with all arithmetic modulo 2^64. Output depends only on (seed, stream_id, i),
 * so a stream replays identically on every platform and under any thread
 * schedule. Each ensemble member b of a model with master seed s draws from
 * RngStream(s, b).
 *
 * Derived variates:
 *   uniform()        (x >> 11) * 2^-53, in [0, 1)
 *   uniform_index(n) rejection sampling: draw x until x >= (2^64 - n) mod n,
 *                    return x mod n (unbiased)
 *   normal()         Box-Muller, cosine branch only:
 *                    sqrt(-2 ln(1 - u1)) * cos(2 pi u2) from two uniforms
 */
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
        : seed_(seed), stream_id_(stream_id),
          key_(mix64(seed ^ mix64(stream_id ^ 0xD1B54A32D192ED03ULL))) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }
    std::uint64_t position() const noexcept { return counter_; }

    // Random access to the i-th output without advancing.
    std::uint64_t at(std::uint64_t i) const noexcept {
        return mix64(key_ + (i + 1) * 0x9E3779B97F4A7C15ULL);
    }

    std::uint64_t next() noexcept { return at(counter_++); }

    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n); n must be positive.
    std::uint64_t uniform_index(std::uint64_t n) noexcept;

    double normal() noexcept;
    double normal(double mean, double sd) noexcept { return mean + sd * normal(); }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace exn
