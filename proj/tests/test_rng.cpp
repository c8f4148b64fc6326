#include <cmath>
#include <cstdint>

#include "cslab/rng.hpp"

#include "gtest/gtest.h"

namespace {

using cslab::Rng;

TEST(Rng, MatchesPublishedSplitMix64Vectors)
{
    Rng a(0);
    EXPECT_EQ(a.next_u64(), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(a.next_u64(), 0x6e789e6aa1b965f4ULL);
    EXPECT_EQ(a.next_u64(), 0x06c45d188009454fULL);
    EXPECT_EQ(a.next_u64(), 0xf88bb8a8724c81ecULL);

    Rng b(42);
    EXPECT_EQ(b.next_u64(), 0xbdd732262feb6e95ULL);
    EXPECT_EQ(b.next_u64(), 0x28efe333b266f103ULL);
    EXPECT_EQ(b.next_u64(), 0x47526757130f9f52ULL);
    EXPECT_EQ(b.next_u64(), 0x581ce1ff0e4ae394ULL);
}

TEST(Rng, CounterAccessIsRandomAccess)
{
    Rng r(7);
    const std::uint64_t x5 = r.at(5);
    for (int i = 0; i < 5; ++i) r.next_u64();
    EXPECT_EQ(r.next_u64(), x5);
    EXPECT_EQ(r.counter(), 6u);
}

TEST(Rng, DerivedStreamsDifferAndRepeat)
{
    EXPECT_EQ(Rng::derive(1, 2), Rng::derive(1, 2));
    EXPECT_NE(Rng::derive(1, 2), Rng::derive(1, 3));
    EXPECT_NE(Rng::derive(1, 2), Rng::derive(2, 2));
    Rng a(9);
    EXPECT_EQ(a.split(4).key(), Rng::derive(9, 4));
}

TEST(Rng, UniformsStayInRange)
{
    Rng r(123);
    for (int i = 0; i < 10000; ++i) {
        const double u = r.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
        const double v = r.uniform_open();
        EXPECT_GT(v, 0.0);
        EXPECT_LE(v, 1.0);
        EXPECT_LT(r.below(7), 7u);
    }
}

TEST(Rng, NormalMomentsAreClose)
{
    Rng r(2024);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        s += x;
        s2 += x * x;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    EXPECT_NEAR(mean, 0.0, 0.01);
    EXPECT_NEAR(var, 1.0, 0.02);
    // Every normal consumes exactly two outputs.
    EXPECT_EQ(r.counter(), static_cast<std::uint64_t>(2 * n));
}

TEST(Rng, BelowIsRoughlyUniform)
{
    Rng r(5);
    int counts[5] = {0, 0, 0, 0, 0};
    for (int i = 0; i < 50000; ++i) ++counts[r.below(5)];
    for (int c : counts) EXPECT_NEAR(c, 10000, 400);
}

} // namespace
