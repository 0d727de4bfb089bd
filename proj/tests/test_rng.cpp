#include <doctest.h>

#include <set>

#include "qps/rng.hpp"

using namespace qps;

TEST_CASE("philox4x32-10 reference vectors") {
    // Known-answer vectors from the Random123 distribution.
    auto out = rng::philox4x32({0u, 0u, 0u, 0u}, {0u, 0u});
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);

    out = rng::philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          {0xffffffffu, 0xffffffffu});
    CHECK(out[0] == 0x408f276du);
    CHECK(out[1] == 0x41c83b0eu);
    CHECK(out[2] == 0xa20bc7c6u);
    CHECK(out[3] == 0x6d5451fdu);

    out = rng::philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          {0xa4093822u, 0x299f31d0u});
    CHECK(out[0] == 0xd16cfe09u);
    CHECK(out[1] == 0x94fdccebu);
    CHECK(out[2] == 0x5001e420u);
    CHECK(out[3] == 0x24126ea1u);
}

TEST_CASE("streams are reproducible and context-separated") {
    rng::Stream a(42, rng::Ctx::test, 7);
    rng::Stream b(42, rng::Ctx::test, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    rng::Stream c(42, rng::Ctx::test, 8);
    rng::Stream d(42, rng::Ctx::generic, 7);
    rng::Stream e(43, rng::Ctx::test, 7);
    rng::Stream base(42, rng::Ctx::test, 7);
    const auto x = base.next_u64();
    CHECK(c.next_u64() != x);
    CHECK(d.next_u64() != x);
    CHECK(e.next_u64() != x);
}

TEST_CASE("unit doubles are strictly inside (0,1) and roughly uniform") {
    rng::Stream s(1, rng::Ctx::test, 0);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = s.next_unit();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::fabs(sum / 100000.0 - 0.5) < 5e-3);
}

TEST_CASE("bernoulli produces both signs") {
    rng::Stream s(1, rng::Ctx::test, 1);
    std::set<double> seen;
    for (int i = 0; i < 64; ++i) seen.insert(s.bernoulli_pm1());
    CHECK(seen == std::set<double>{-1.0, 1.0});
}
