#include <gtest/gtest.h>

#include <cmath>

#include "corrbound/rng.hpp"

using namespace corrbound;

TEST(SplitMix64, MatchesReferenceOutputs) {
    // Reference stream of splitmix64.c seeded with 1234567.
    std::uint64_t x = 1234567;
    EXPECT_EQ(splitmix64(x), 6457827717110365317ULL);
    EXPECT_EQ(splitmix64(x), 3203168211198807973ULL);
    EXPECT_EQ(splitmix64(x), 9817491932198370423ULL);
    EXPECT_EQ(splitmix64(x), 4593380528125082431ULL);
    EXPECT_EQ(splitmix64(x), 16408922859458223821ULL);
}

TEST(Xoshiro256, MatchesReferenceOutputsFromRawState) {
    Xoshiro256 rng(std::array<std::uint64_t, 4>{1, 2, 3, 4});
    EXPECT_EQ(rng(), 11520ULL);
    EXPECT_EQ(rng(), 0ULL);
    EXPECT_EQ(rng(), 1509978240ULL);
    EXPECT_EQ(rng(), 1215971899390074240ULL);
}

TEST(Xoshiro256, SameSeedSameStream) {
    Xoshiro256 a(99), b(99), c(100);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        EXPECT_EQ(x, b());
        differs = differs || x != c();
    }
    EXPECT_TRUE(differs);
}

TEST(Xoshiro256, StreamsAreDistinct) {
    Xoshiro256 a(7, 0), b(7, 1);
    int equal = 0;
    for (int i = 0; i < 1000; ++i) equal += a() == b();
    EXPECT_EQ(equal, 0);
}

TEST(Xoshiro256, UniformRangesAndMoments) {
    Xoshiro256 rng(5);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        const double v = rng.uniform_open_closed();
        ASSERT_GT(v, 0.0);
        ASSERT_LE(v, 1.0);
        sum += u;
    }
    // Mean 1/2, sd of the mean sqrt(1/12/n) ~ 6.5e-4.
    EXPECT_NEAR(sum / n, 0.5, 4e-3);
}

TEST(Xoshiro256, ExponentialMeanAndZeroRate) {
    Xoshiro256 rng(11);
    EXPECT_TRUE(std::isinf(rng.exponential(0.0)));
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = rng.exponential(2.0);
        ASSERT_GT(x, 0.0);
        ASSERT_TRUE(std::isfinite(x));
        sum += x;
    }
    // Mean 1/2 with sd of the mean 0.5 / sqrt(n) ~ 1.1e-3.
    EXPECT_NEAR(sum / n, 0.5, 6e-3);
}
