#include <doctest.h>

#include <cmath>

#include "qps/stats.hpp"
#include "qps/torus.hpp"

using namespace qps;

TEST_CASE("quantile uses midpoint interpolation") {
    std::vector<double> two{0.0, 1.0};
    CHECK(stats::quantile(two, 0.25) == doctest::Approx(0.25));
    CHECK(stats::quantile(two, 0.75) == doctest::Approx(0.75));
    CHECK(stats::iqr(two) == doctest::Approx(0.5));  // pinned two-point convention

    std::vector<double> xs{3.0, 1.0, 2.0, 4.0, 5.0};
    CHECK(stats::median(xs) == doctest::Approx(3.0));
    CHECK(stats::quantile(xs, 0.0) == doctest::Approx(1.0));
    CHECK(stats::quantile(xs, 1.0) == doctest::Approx(5.0));
}

TEST_CASE("circular stats") {
    std::vector<double> constant(32, M_PI / 2);
    auto c = stats::circular_stats(constant);
    CHECK(c.mean == doctest::Approx(M_PI / 2));
    CHECK(c.stddev == doctest::Approx(0.0));
    CHECK(c.resultant == doctest::Approx(1.0));

    // mean near the wrap point must not average to ~0
    std::vector<double> wrapped{M_PI - 0.01, -M_PI + 0.01};
    c = stats::circular_stats(wrapped);
    CHECK(std::fabs(std::fabs(c.mean) - M_PI) < 1e-9);

    // uniform angles: resultant collapses
    std::vector<double> uniform;
    for (int i = 0; i < 360; ++i) uniform.push_back(-M_PI + two_pi * i / 360.0);
    c = stats::circular_stats(uniform);
    CHECK(c.resultant < 1e-10);
    CHECK(c.stddev > 5.0);  // -> inf as R -> 0; the resultant carries the signal
}

TEST_CASE("circle distance mod 1") {
    CHECK(stats::circle_dist_mod1(0.1, 0.9) == doctest::Approx(0.2));
    CHECK(stats::circle_dist_mod1(0.0, 1.0) == doctest::Approx(0.0));
    CHECK(stats::circle_dist_mod1(-0.25, 0.5) == doctest::Approx(0.25));
    CHECK(stats::circle_dist_mod1(0.3, 0.3) == doctest::Approx(0.0));
}

TEST_CASE("bootstrap is deterministic and brackets the estimate") {
    std::vector<double> xs;
    rng::Stream s(5, rng::Ctx::test, 0);
    for (int i = 0; i < 400; ++i) xs.push_back(s.uniform_pm1());
    auto med = [](const std::vector<double>& v) {
        return stats::median(v);
    };
    const auto ci1 = stats::bootstrap_ci(xs, med, 500, 11);
    const auto ci2 = stats::bootstrap_ci(xs, med, 500, 11);
    CHECK(ci1.lo == ci2.lo);
    CHECK(ci1.hi == ci2.hi);
    const double m = stats::median(xs);
    CHECK(ci1.lo <= m);
    CHECK(ci1.hi >= m);
    CHECK(ci1.hi - ci1.lo < 0.3);
}
