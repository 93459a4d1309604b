#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "ccorr/rng.hpp"

using ccorr::Philox4x32;

TEST(Philox, KnownAnswerZero) {
    const auto out = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(out, (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerOnes) {
    const auto out = Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                          {0xffffffffu, 0xffffffffu});
    EXPECT_EQ(out, (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
    const auto out = Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                          {0xa4093822u, 0x299f31d0u});
    EXPECT_EQ(out, (Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Rng, OpenUnitInterval) {
    EXPECT_GT(ccorr::to_open_unit(0, 0), 0.0);
    EXPECT_LT(ccorr::to_open_unit(0xffffffffu, 0xffffffffu), 1.0);
}

TEST(Rng, AddressableAndDeterministic) {
    ccorr::CounterRng a(7, 3);
    ccorr::CounterRng b(7, 3);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(a.uniform(), b.uniform());
    }
    const auto direct = ccorr::uniform_pair(7, 3, 0);
    ccorr::CounterRng c(7, 3);
    EXPECT_EQ(c.uniform(), direct[0]);
    EXPECT_EQ(c.uniform(), direct[1]);
    EXPECT_EQ(c.position(), 1u);
}

TEST(Rng, StreamsDiffer) {
    std::set<double> seen;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        seen.insert(ccorr::uniform_pair(1, s, 0)[0]);
    }
    EXPECT_EQ(seen.size(), 1000u);
}

TEST(Rng, NormalMoments) {
    ccorr::CounterRng rng(11, 0);
    const int n = 200000;
    double m1 = 0.0;
    double m2 = 0.0;
    double m4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        m1 += z;
        m2 += z * z;
        m4 += z * z * z * z;
    }
    m1 /= n;
    m2 /= n;
    m4 /= n;
    EXPECT_NEAR(m1, 0.0, 4.0 / std::sqrt(n));
    EXPECT_NEAR(m2, 1.0, 4.0 * std::sqrt(2.0 / n));
    EXPECT_NEAR(m4, 3.0, 4.0 * std::sqrt(96.0 / n));
}
