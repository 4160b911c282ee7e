#pragma once

// Counter-based random numbers.
//
// Every random quantity in the library is a pure function of a 64-bit seed
// and a counter tuple, so runs are reproducible regardless of how work is
// split between threads. The generator is Philox4x32-10 (Salmon et al.,
// "Parallel random numbers: as easy as 1, 2, 3", SC'11).

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace ssa::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

namespace detail {

inline constexpr std::uint32_t kMul0 = 0xD2511F53u;
inline constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

constexpr void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace detail

/// Philox4x32 with 10 rounds.
constexpr Counter philox4x32(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        detail::mulhilo(detail::kMul0, ctr[0], hi0, lo0);
        detail::mulhilo(detail::kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += detail::kWeyl0;
        key[1] += detail::kWeyl1;
    }
    return ctr;
}

constexpr Key key_from_seed(std::uint64_t seed) {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Seed of the index-th child stream of `master` (trials, search candidates,
/// evaluation runs). Rule: mix64(master + 0x9E3779B97F4A7C15 * (index + 1)).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master + 0x9E3779B97F4A7C15ull * (index + 1));
}

/// Stream tags occupy the last counter word so that different consumers of
/// one seed never share a counter.
enum class Stream : std::uint32_t {
    kNoise = 1,
    kInit = 2,
    kSaInit = 3,
    kSaMove = 4,
    kSearch = 5,
    kGenerator = 6,
};

/// Stateless accessor bound to one seed.
class CounterRng {
public:
    constexpr explicit CounterRng(std::uint64_t seed) : seed_(seed), key_(key_from_seed(seed)) {}

    constexpr std::uint64_t seed() const { return seed_; }

    constexpr Counter block(Stream stream, std::uint64_t a, std::uint32_t b = 0) const {
        return philox4x32(
            {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32), b,
             static_cast<std::uint32_t>(stream)},
            key_);
    }

    /// Two 64-bit words per (stream, a, b).
    constexpr std::array<std::uint64_t, 2> words(Stream stream, std::uint64_t a,
                                                 std::uint32_t b = 0) const {
        const Counter c = block(stream, a, b);
        return {(static_cast<std::uint64_t>(c[1]) << 32) | c[0],
                (static_cast<std::uint64_t>(c[3]) << 32) | c[2]};
    }

private:
    std::uint64_t seed_;
    Key key_;
};

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by 128-bit multiply-shift.
inline std::uint64_t to_index(std::uint64_t bits, std::uint64_t bound) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(bits) * bound) >> 64);
}

/// Fair +-1 signal r_i(t), one Philox block per 128 spins of a cycle.
class SpinNoise {
public:
    constexpr explicit SpinNoise(std::uint64_t seed) : rng_(seed) {}

    int operator()(std::size_t spin, std::uint64_t cycle) const {
        const Counter c = rng_.block(Stream::kNoise, spin / 128, static_cast<std::uint32_t>(cycle));
        const std::size_t bit = spin % 128;
        return ((c[bit / 32] >> (bit % 32)) & 1u) ? 1 : -1;
    }

    /// Fills signs for spins [first, first + out.size()) at `cycle`.
    template <class Span>
    void fill(std::size_t first, std::uint64_t cycle, Span out) const {
        std::size_t spin = first;
        std::size_t k = 0;
        while (k < out.size()) {
            const Counter c = rng_.block(Stream::kNoise, spin / 128, static_cast<std::uint32_t>(cycle));
            for (std::size_t bit = spin % 128; bit < 128 && k < out.size(); ++bit, ++spin, ++k)
                out[k] = ((c[bit / 32] >> (bit % 32)) & 1u) ? 1 : -1;
        }
    }

    constexpr std::uint64_t seed() const { return rng_.seed(); }

private:
    CounterRng rng_;
};

}  // namespace ssa::rng
