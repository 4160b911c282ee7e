#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <span>
#include <vector>

#include "ssa/rng.hpp"

using namespace ssa::rng;

// Known-answer vectors published with the Random123 library.
TEST(Philox, KnownAnswers) {
    EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}), (Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(DeriveSeed, ChildrenAreDistinct) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t k = 0; k < 10000; ++k) seen.insert(derive_seed(42, k));
    EXPECT_EQ(seen.size(), 10000u);
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(SpinNoise, FillMatchesPointQueries) {
    const SpinNoise noise(7);
    std::vector<int> block(300);
    noise.fill(5, 11, std::span<int>(block));
    for (std::size_t k = 0; k < block.size(); ++k) EXPECT_EQ(block[k], noise(5 + k, 11)) << k;
}

TEST(SpinNoise, RoughlyFairAndCycleDependent) {
    const SpinNoise noise(123);
    long sum = 0;
    int same = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        sum += noise(static_cast<std::size_t>(i), 0);
        same += noise(static_cast<std::size_t>(i), 0) == noise(static_cast<std::size_t>(i), 1);
    }
    // 5 sigma for a fair coin: 5 * sqrt(n).
    EXPECT_LT(std::abs(sum), 5 * std::sqrt(n));
    EXPECT_LT(std::abs(2 * same - n), 5 * std::sqrt(n));
}

TEST(Conversions, UnitIntervalAndIndexBounds) {
    EXPECT_EQ(to_unit(0), 0.0);
    EXPECT_LT(to_unit(~std::uint64_t{0}), 1.0);
    EXPECT_EQ(to_index(0, 10), 0u);
    EXPECT_EQ(to_index(~std::uint64_t{0}, 10), 9u);
}
