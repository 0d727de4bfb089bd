#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qps/rng.hpp"
#include "qps/torus.hpp"

using namespace qps;

namespace {

// Kolmogorov-Smirnov distance to the uniform law on [0, 2*pi).
double ks_uniform(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const double n = double(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = xs[i] / two_pi;
        d = std::max(d, std::fabs(double(i) / n - f));
        d = std::max(d, std::fabs(double(i + 1) / n - f));
    }
    return d;
}

}  // namespace

TEST_CASE("shift arithmetic") {
    const FrequencyVector half({0.5});
    auto p = shift(TorusPoint({0.0}), half);
    CHECK(p[0] == doctest::Approx(M_PI).epsilon(1e-14));
    p = shift(TorusPoint({M_PI}), half);
    CHECK(p[0] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("double shift matches direct modular arithmetic") {
    const FrequencyVector alpha({(std::sqrt(5.0) - 1.0) / 2.0, 0.3});
    auto p = shift(shift(TorusPoint::zero(2), alpha), alpha);
    // oracle: frac(2 alpha) * 2 pi computed in one multiply
    const double f0 = std::sqrt(5.0) - 2.0;  // frac(2 * golden)
    CHECK(std::fabs(p[0] - two_pi * f0) < 1e-12);
    CHECK(std::fabs(p[1] - two_pi * 0.6) < 1e-12);
}

TEST_CASE("shift then inverse shift recovers the point") {
    const auto alpha = FrequencyVector::golden();
    rng::Stream s(3, rng::Ctx::test, 0);
    for (int i = 0; i < 1000; ++i) {
        const TorusPoint p({two_pi * s.next_unit()});
        const auto q = shift_back(shift(p, alpha), alpha);
        CHECK(std::fabs(q[0] - p[0]) < 1e-12);
    }
}

TEST_CASE("shift_n agrees with repeated shifts and supports negative n") {
    const auto alpha = FrequencyVector::golden();
    TorusPoint p({1.0});
    for (int n = 0; n <= 1000; ++n) {
        const auto q = shift_n(TorusPoint({1.0}), alpha, n);
        CHECK(std::fabs(q[0] - p[0]) < 1e-10);
        p = shift(p, alpha);
    }
    const auto back = shift_n(TorusPoint({1.0}), alpha, -3);
    auto fwd = shift(shift(shift(back, alpha), alpha), alpha);
    CHECK(std::fabs(fwd[0] - 1.0) < 1e-12);
}

TEST_CASE("potential evaluation") {
    const auto am = TrigPotential::almost_mathieu(2.0);
    CHECK(am.eval(TorusPoint({0.0})) == doctest::Approx(2.0));
    CHECK(std::fabs(am.eval(TorusPoint({M_PI / 2}))) < 1e-15);

    TrigPotential two_freq;
    two_freq.nu = 2;
    two_freq.terms.push_back({{1, 0}, 1.0, 0.0});
    two_freq.terms.push_back({{0, 1}, 0.5, 0.0});
    CHECK(two_freq.eval(TorusPoint({0.0, M_PI})) == doctest::Approx(0.5));
}

TEST_CASE("potential is 2pi periodic per coordinate") {
    const auto am = TrigPotential::almost_mathieu(1.3);
    rng::Stream s(4, rng::Ctx::test, 0);
    for (int i = 0; i < 200; ++i) {
        const double th = two_pi * s.next_unit();
        const double a = am.eval(TorusPoint({th}));
        const double b = am.eval(TorusPoint({th + two_pi}));
        CHECK(std::fabs(a - b) < 1e-12);
    }
}

TEST_CASE("orbit samples") {
    const auto alpha = FrequencyVector::golden();
    const auto zeros = orbit_sample(TrigPotential::zero(1), TorusPoint({0.3}), alpha, 5);
    for (double v : zeros) CHECK(v == 0.0);

    const auto cosine = TrigPotential::almost_mathieu(1.0);
    const auto period2 =
        orbit_sample(cosine, TorusPoint({0.0}), FrequencyVector({0.5}), 4);
    CHECK(period2[0] == doctest::Approx(1.0));
    CHECK(period2[1] == doctest::Approx(-1.0));
    CHECK(period2[2] == doctest::Approx(1.0));
    CHECK(period2[3] == doctest::Approx(-1.0));

    // Weyl equidistribution: the empirical mean of cos over the golden orbit
    // vanishes; cross-checked at n = 1e6.
    const auto o4 = orbit_sample(cosine, TorusPoint({0.0}), alpha, 10000);
    double mean4 = 0.0;
    for (double v : o4) mean4 += v;
    mean4 /= double(o4.size());
    CHECK(std::fabs(mean4) < 2e-2);
    const auto o6 = orbit_sample(cosine, TorusPoint({0.0}), alpha, 1000000);
    double mean6 = 0.0;
    for (double v : o6) mean6 += v;
    mean6 /= double(o6.size());
    CHECK(std::fabs(mean6) < 2e-3);
}

TEST_CASE("orbit_sample input validation") {
    CHECK_THROWS_AS(orbit_sample(TrigPotential::zero(1), TorusPoint({0.0}),
                                 FrequencyVector::golden(), 0),
                    Error);
    CHECK_THROWS_AS(orbit_sample(TrigPotential::zero(1), TorusPoint({0.0}),
                                 FrequencyVector::golden(),
                                 (std::int64_t(1) << 41)),
                    Error);
}

TEST_CASE("golden orbit is equidistributed (KS)") {
    const auto alpha = FrequencyVector::golden();
    std::vector<double> xs;
    xs.reserve(100000);
    TorusPoint p({0.0});
    for (int i = 0; i < 100000; ++i) {
        xs.push_back(shift_n(TorusPoint({0.0}), alpha, i)[0]);
    }
    CHECK(ks_uniform(std::move(xs)) < 0.02);
    (void)p;
}

TEST_CASE("ergodicity check finds rational frequencies") {
    const auto hit = find_resonant_m(FrequencyVector({0.5}), 10000);
    REQUIRE(hit.has_value());
    CHECK(*hit == std::vector<int>{2});

    CHECK_FALSE(find_resonant_m(FrequencyVector::golden(), 10000).has_value());

    // nu = 2: m = (1, -2) resonates for alpha = (0.4, 0.2)
    const auto hit2 = find_resonant_m(FrequencyVector({0.4, 0.2}), 10);
    REQUIRE(hit2.has_value());
}
