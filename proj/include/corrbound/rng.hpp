#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace corrbound {

/// SplitMix64 step; used to expand a 64-bit seed into generator state.
constexpr std::uint64_t splitmix64(std::uint64_t& x) noexcept {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256** (Blackman & Vigna). Bit-exact on every platform; all real
/// variates are derived from the raw 64-bit output with integer arithmetic
/// plus a single libm call, so streams do not depend on the standard
/// library's distribution implementations.
class Xoshiro256 {
  public:
    using result_type = std::uint64_t;

    static constexpr const char* name = "xoshiro256**/splitmix64";

    explicit Xoshiro256(std::uint64_t seed = 0) noexcept { reseed(seed); }

    /// Independent stream: the (seed, stream) pair is hashed into the state.
    Xoshiro256(std::uint64_t seed, std::uint64_t stream) noexcept {
        std::uint64_t mix = seed;
        std::uint64_t salt = splitmix64(mix) ^ (stream * 0xd1b54a32d192ed03ULL);
        reseed(salt);
    }

    /// Raw state; must not be all zero.
    explicit Xoshiro256(const std::array<std::uint64_t, 4>& state) noexcept : s_(state) {}

    void reseed(std::uint64_t seed) noexcept {
        std::uint64_t x = seed;
        for (auto& word : s_) word = splitmix64(x);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_open_closed() noexcept { return 1.0 - uniform(); }

    /// Exponential with the given rate; rate 0 gives +infinity.
    double exponential(double rate) noexcept;

    const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

} // namespace corrbound
