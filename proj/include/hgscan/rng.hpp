#pragma once

#include <array>
#include <cstdint>

namespace hgscan {

/// Counter-based generator: Philox4x32 with 10 rounds (Salmon et al. 2011).
///
/// Bit-level contract used for every random draw in this project:
///   key     = { seed & 0xffffffff, seed >> 32 }
///   counter = { c0 & 0xffffffff, c0 >> 32, c1 & 0xffffffff, c1 >> 32 }
///   out     = philox4x32_10(counter, key)
///   uniform = ((uint64(out[1]) << 32 | out[0]) >> 11) * 2^-53   in [0, 1)
/// For edge sampling c0 = colex rank of the edge and c1 = replicate id.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

/// Uniform in [0,1) as a pure function of (seed, c0, c1).
double counter_uniform(std::uint64_t seed, std::uint64_t c0, std::uint64_t c1) noexcept;

/// Stateless 64-bit mix (splitmix64 finaliser); used to derive sub-seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Sequential stream over counter_uniform for one (seed, stream) pair.
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}
    double uniform() noexcept { return counter_uniform(seed_, next_++, stream_); }
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t next_ = 0;
};

}  // namespace hgscan
