#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace qps::rng {

// Philox4x32-10 block cipher (Salmon et al., SC'11). Counter-based: the n-th
// random block is a pure function of (key, counter), so parallel workers can
// draw from disjoint streams without sharing state and every draw is
// reproducible from its coordinates alone.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t(m0) * ctr[0];
        const std::uint64_t p1 = std::uint64_t(m1) * ctr[2];
        ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1),
               std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(p0)};
        key[0] += w0;
        key[1] += w1;
    }
    return ctr;
}

// Stream contexts keep logically distinct consumers of the same seed apart.
enum class Ctx : std::uint32_t {
    generic = 0,
    tree_vertex = 1,   // full-tree per-vertex disorder
    radial_gen = 2,    // radial per-generation disorder
    pool_omega = 3,    // pool-slot disorder
    pool_draw = 4,     // pool-slot ancestor draws
    root_omega = 5,    // root-sample disorder
    root_draw = 6,     // root-sample pool draws
    bootstrap = 7,
    test = 8,
};

// One logical stream: key = 64-bit seed, counter = (draw, unit_lo, unit_hi, ctx).
class Stream {
public:
    Stream(std::uint64_t seed, Ctx ctx, std::uint64_t unit)
        : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
          base_{0u, std::uint32_t(unit), std::uint32_t(unit >> 32),
                static_cast<std::uint32_t>(ctx)} {}

    std::uint32_t next_u32() {
        if (have_ == 0) refill();
        return buf_[--have_];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // (0,1), strictly interior; 53-bit resolution
    double next_unit() {
        return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform_pm1() { return 2.0 * next_unit() - 1.0; }

    double bernoulli_pm1() { return (next_u32() & 1u) ? 1.0 : -1.0; }

    // standard Cauchy scaled; heavy tails but E[log(1+|w|)] finite
    double cauchy(double scale) {
        return scale * std::tan(M_PI * (next_unit() - 0.5));
    }

    // index uniform in [0, n)
    std::uint64_t index_below(std::uint64_t n) { return next_u64() % n; }

private:
    void refill() {
        auto ctr = base_;
        ctr[0] = draw_++;
        buf_ = philox4x32(ctr, key_);
        have_ = 4;
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> base_;
    std::uint32_t draw_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int have_ = 0;
};

}  // namespace qps::rng
